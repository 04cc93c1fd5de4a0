//! Class-2 collection in closed form.
//!
//! With every commutator and power value central, moving `g_i^b` left past
//! `g_j^a` (`j > i`) leaves `[g_j, g_i]^{ab}` behind in the `z`-block, and an
//! exponent overflow `a_i >= q_i` is paid out through the power word.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::presentation::{Element, GroupWord, PcPresentation};
use super::PcError;

impl PcPresentation {
    /// Reduces an arbitrary exponent vector (noncentral part in generator
    /// order, central part commuting) to normal form.
    pub(crate) fn normalize(&self, mut v: Vec<i64>) -> Element {
        let m = self.noncentral;
        let n = self.num_gens();
        for i in 0..n {
            let q = self.orders[i];
            let (carry, r) = v[i].div_mod_floor(&q);
            v[i] = r;
            if carry != 0 {
                for (k, &w) in self.power_words[i].iter().enumerate() {
                    if w != 0 {
                        v[m + k] += carry * w;
                    }
                }
            }
        }
        Element(v)
    }

    fn normalize_big(&self, mut v: Vec<BigInt>) -> Element {
        let m = self.noncentral;
        for i in 0..self.num_gens() {
            let q = BigInt::from(self.orders[i]);
            let (carry, r) = v[i].div_mod_floor(&q);
            v[i] = r;
            if !carry.is_zero() {
                for (k, &w) in self.power_words[i].iter().enumerate() {
                    if w != 0 {
                        v[m + k] += &carry * w;
                    }
                }
            }
        }
        Element(v.iter().map(|x| x.to_i64().expect("reduced exponent fits")).collect())
    }

    fn check_element(&self, x: &Element) {
        debug_assert_eq!(x.0.len(), self.num_gens(), "element from another presentation");
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Element {
        self.check_element(x);
        self.check_element(y);
        let m = self.noncentral;
        let mut v: Vec<i64> = x.0.iter().zip(&y.0).map(|(a, b)| a + b).collect();
        for j in 1..m {
            let a = x.0[j];
            if a == 0 {
                continue;
            }
            for i in 0..j {
                let b = y.0[i];
                if b == 0 {
                    continue;
                }
                for (k, &c) in self.comm[j][i].iter().enumerate() {
                    if c != 0 {
                        v[m + k] += a * b * c;
                    }
                }
            }
        }
        self.normalize(v)
    }

    /// `x^n` via the closed form
    /// `(u_1...u_m)^n = prod u_i^n * prod_{i<j} [u_j, u_i]^{C(n,2)}`,
    /// valid for all integers `n` in class two.
    pub fn power(&self, x: &Element, n: i64) -> Element {
        self.power_big(x, &BigInt::from(n))
    }

    pub fn power_big(&self, x: &Element, n: &BigInt) -> Element {
        self.check_element(x);
        let m = self.noncentral;
        let binom: BigInt = n * (n - 1) / 2;
        let mut v: Vec<BigInt> = x.0.iter().map(|&a| n * a).collect();
        for j in 1..m {
            if x.0[j] == 0 {
                continue;
            }
            for i in 0..j {
                let ab = x.0[j] * x.0[i];
                if ab == 0 {
                    continue;
                }
                for (k, &c) in self.comm[j][i].iter().enumerate() {
                    if c != 0 {
                        v[m + k] += &binom * (ab * c);
                    }
                }
            }
        }
        self.normalize_big(v)
    }

    /// `x^n` by repeated squaring; independent of the closed form.
    pub fn power_by_squaring(&self, x: &Element, n: i64) -> Element {
        let mut base = if n < 0 { self.inverse(x) } else { x.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &base);
            }
            base = self.multiply(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inverse(&self, x: &Element) -> Element {
        self.power(x, -1)
    }

    /// `[x, y] = x^-1 y^-1 x y`.
    pub fn commutator(&self, x: &Element, y: &Element) -> Element {
        let xi = self.inverse(x);
        let yi = self.inverse(y);
        self.multiply(&self.multiply(&xi, &yi), &self.multiply(x, y))
    }

    /// `z`-block vector of `[x, y]` computed bilinearly from the generator
    /// commutators; agrees with [`PcPresentation::commutator`] in normal form.
    pub fn commutator_z(&self, x: &Element, y: &Element) -> Vec<i64> {
        let m = self.noncentral;
        let mut v = vec![0i64; self.num_central()];
        for i in 0..m {
            if x.0[i] == 0 {
                continue;
            }
            for j in 0..m {
                let ab = x.0[i] * y.0[j];
                if ab == 0 || i == j {
                    continue;
                }
                for (k, &c) in self.comm[i][j].iter().enumerate() {
                    v[k] += ab * c;
                }
            }
        }
        v
    }

    /// `x^y = y^-1 x y`.
    pub fn conjugate(&self, x: &Element, y: &Element) -> Element {
        self.multiply(&self.multiply(&self.inverse(y), x), y)
    }

    /// `g_i^e` in normal form.
    pub fn gen_power(&self, i: usize, e: i64) -> Element {
        let mut v = vec![0; self.num_gens()];
        v[i] = e;
        self.normalize(v)
    }

    /// Collects a word to its normal form.
    pub fn collect(&self, w: &GroupWord) -> Result<Element, PcError> {
        let mut acc = self.identity();
        for &(g, e) in w.factors() {
            if g >= self.num_gens() {
                return Err(PcError::IndexOutOfRange(g));
            }
            acc = self.multiply(&acc, &self.gen_power(g, e));
        }
        Ok(acc)
    }

    /// Collects strictly left to right one generator letter at a time,
    /// without using power words as shortcuts.
    fn collect_letters(&self, letters: &[usize]) -> Element {
        letters.iter().fold(self.identity(), |acc, &g| self.multiply(&acc, &self.generator_raw(g)))
    }

    fn generator_raw(&self, i: usize) -> Element {
        let mut v = vec![0; self.num_gens()];
        v[i] = 1;
        self.normalize(v)
    }

    /// Order of an element (a power of p).
    pub fn element_order(&self, x: &Element) -> u64 {
        let mut y = x.clone();
        let mut ord = 1u64;
        while !y.is_identity() {
            y = self.power(&y, self.prime as i64);
            ord *= self.prime;
        }
        ord
    }

    /// Runs every consistency, class, and refinement check.
    pub fn check(&self) -> ConsistencyReport {
        let mut failures = Vec::new();
        let n = self.num_gens();
        let m = self.noncentral;
        let t = self.num_central();
        let mut refined = true;
        let mut class_two = true;

        for k in 0..t {
            let g = m + k;
            if self.power_words[g][..=k].iter().any(|&x| x != 0) {
                refined = false;
                failures.push(format!("power word of central {} must use later central generators", self.labels[g]));
            }
        }
        for j in 0..n {
            for i in 0..n {
                if (j >= m || i >= m) && self.comm[j][i].iter().any(|&x| x != 0) {
                    class_two = false;
                    failures.push(format!("[{},{}] nontrivial with a central generator", self.labels[j], self.labels[i]));
                }
                if self.comm[j][i].iter().zip(&self.comm[i][j]).any(|(a, b)| a + b != 0) {
                    failures.push(format!("commutator table not antisymmetric at [{},{}]", self.labels[j], self.labels[i]));
                }
            }
        }

        let mut consistent = true;
        if refined && class_two {
            // triple overlaps g_k (g_j g_i) = (g_k g_j) g_i
            for k in 0..n {
                for j in 0..=k {
                    for i in 0..=j {
                        let (gk, gj, gi) = (self.generator_raw(k), self.generator_raw(j), self.generator_raw(i));
                        let left = self.multiply(&self.multiply(&gk, &gj), &gi);
                        let right = self.multiply(&gk, &self.multiply(&gj, &gi));
                        if left != right {
                            consistent = false;
                            failures.push(format!(
                                "overlap {} {} {} collects two ways",
                                self.labels[k], self.labels[j], self.labels[i]
                            ));
                        }
                    }
                }
            }
            // power overlaps: g_j^{q_j} g_i and g_j g_i^{q_i}, letter by letter
            // versus substituting the power word first
            for j in 0..n {
                let qj = self.orders[j] as usize;
                let pw_j = self.z_element(&self.power_words[j]);
                for i in 0..n {
                    let qi = self.orders[i] as usize;
                    let gi = self.generator_raw(i);
                    let gj = self.generator_raw(j);
                    let mut letters = vec![j; qj];
                    letters.push(i);
                    let stepwise = self.collect_letters(&letters);
                    let substituted = self.multiply(&pw_j, &gi);
                    if stepwise != substituted {
                        consistent = false;
                        failures.push(format!("power overlap {}^{} {}", self.labels[j], qj, self.labels[i]));
                    }
                    let mut letters = vec![j];
                    letters.extend(std::iter::repeat_n(i, qi));
                    let stepwise = self.collect_letters(&letters);
                    let substituted = self.multiply(&gj, &self.z_element(&self.power_words[i]));
                    if stepwise != substituted {
                        consistent = false;
                        failures.push(format!("power overlap {} {}^{}", self.labels[j], self.labels[i], qi));
                    }
                }
            }
        }

        ConsistencyReport {
            consistent: consistent && refined && class_two,
            class_two,
            refined,
            order: self.order(),
            failures,
        }
    }

    /// Consistency check as a result, reporting the first failure class.
    pub fn validate(&self) -> Result<(), PcError> {
        let r = self.check();
        let detail = r.failures.first().cloned().unwrap_or_default();
        if !r.refined {
            Err(PcError::NotRefined(detail))
        } else if !r.class_two {
            Err(PcError::ClassTooHigh(detail))
        } else if !r.consistent {
            Err(PcError::InconsistentPresentation(detail))
        } else {
            Ok(())
        }
    }
}

/// Outcome of [`PcPresentation::check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub consistent: bool,
    pub class_two: bool,
    pub refined: bool,
    pub order: BigInt,
    pub failures: Vec<String>,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.consistent && self.class_two && self.refined
    }
}
