//! Formal expansion of `x ∧ y` over generator-pair symbols.
//!
//! Additively, in the abelianized exterior square of a class-2 group,
//!
//! ```text
//! xy ∧ z = x ∧ z + y ∧ z + [x,z] ∧ y
//! x ∧ yz = x ∧ y + x ∧ z + [x,y] ∧ z
//! g^a ∧ h^b = ab (g∧h) + a C(b,2) ([g,h]∧h) + b C(a,2) ([g,h]∧g)
//! ```
//!
//! and `c ∧ w` is bilinear whenever `c` is central. Weight-three terms
//! therefore reduce to symbols `z_k ∧ g_l` and nothing deeper appears.

use serde::{Deserialize, Serialize};

use crate::pc::{Element, GroupWord, PcPresentation};

/// Basis symbol `g_i ∧ g_j` with `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WedgeGen {
    pub i: usize,
    pub j: usize,
}

/// Integer combination of basis symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WedgeWord(pub Vec<i64>);

impl WedgeWord {
    pub fn zero(len: usize) -> Self {
        WedgeWord(vec![0; len])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.0
    }

    pub fn add(&self, other: &WedgeWord) -> WedgeWord {
        WedgeWord(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// Indexing of the symbols `g_i ∧ g_j`, `i < j`, over all generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeBasis {
    n: usize,
    gens: Vec<WedgeGen>,
}

impl WedgeBasis {
    pub fn new(num_gens: usize) -> Self {
        let mut gens = Vec::new();
        for i in 0..num_gens {
            for j in i + 1..num_gens {
                gens.push(WedgeGen { i, j });
            }
        }
        WedgeBasis { n: num_gens, gens }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gens(&self) -> &[WedgeGen] {
        &self.gens
    }

    /// Position of `g_i ∧ g_j` for `i < j`.
    pub fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    pub fn labels(&self, p: &PcPresentation) -> Vec<String> {
        self.gens.iter().map(|g| format!("{}∧{}", p.label(g.i), p.label(g.j))).collect()
    }
}

/// Expansion engine bound to one presentation.
pub struct Expander<'a> {
    p: &'a PcPresentation,
    basis: WedgeBasis,
}

impl<'a> Expander<'a> {
    pub fn new(p: &'a PcPresentation) -> Self {
        Expander { p, basis: WedgeBasis::new(p.num_gens()) }
    }

    pub fn basis(&self) -> &WedgeBasis {
        &self.basis
    }

    pub fn presentation(&self) -> &PcPresentation {
        self.p
    }

    /// Adds `coef · (g ∧ h)` using `h ∧ g = -(g ∧ h)` and `g ∧ g = 0`.
    fn symbol(&self, g: usize, h: usize, coef: i64, out: &mut [i64]) {
        if coef == 0 || g == h {
            return;
        }
        if g < h {
            out[self.basis.index(g, h)] += coef;
        } else {
            out[self.basis.index(h, g)] -= coef;
        }
    }

    /// Adds `c ∧ g^e` for a central `c` given by its `z`-vector.
    fn central(&self, c: &[i64], g: usize, e: i64, out: &mut [i64]) {
        if e == 0 {
            return;
        }
        let m = self.p.num_noncentral();
        for (k, &ck) in c.iter().enumerate() {
            if ck != 0 {
                self.symbol(m + k, g, ck * e, out);
            }
        }
    }

    /// Adds `c ∧ w` for a central `c` and a word `w`.
    fn central_word(&self, c: &[i64], w: &[(usize, i64)], out: &mut [i64]) {
        if c.iter().all(|&x| x == 0) {
            return;
        }
        for &(g, e) in w {
            self.central(c, g, e, out);
        }
    }

    /// `z`-vector of `[g^a, h^b]`.
    fn gen_commutator(&self, g: usize, a: i64, h: usize, b: i64) -> Vec<i64> {
        self.p.comm[g][h].iter().map(|&c| c * a * b).collect()
    }

    /// `z`-vector of `[g^a, w]`.
    fn word_commutator(&self, g: usize, a: i64, w: &[(usize, i64)]) -> Vec<i64> {
        let mut c = vec![0; self.p.num_central()];
        for &(h, b) in w {
            for (k, &x) in self.p.comm[g][h].iter().enumerate() {
                c[k] += x * a * b;
            }
        }
        c
    }

    /// Adds `g^a ∧ h^b`.
    fn power_pair(&self, g: usize, a: i64, h: usize, b: i64, out: &mut [i64]) {
        if a == 0 || b == 0 {
            return;
        }
        self.symbol(g, h, a * b, out);
        let c = &self.p.comm[g][h];
        if c.iter().all(|&x| x == 0) {
            return;
        }
        self.central(c, h, a * binom2(b), out);
        self.central(c, g, b * binom2(a), out);
    }

    /// Adds `g^a ∧ v_1 ... v_r`.
    fn left_power(&self, g: usize, a: i64, v: &[(usize, i64)], out: &mut [i64]) {
        for (j, &(h, b)) in v.iter().enumerate() {
            self.power_pair(g, a, h, b, out);
            let c = self.gen_commutator(g, a, h, b);
            self.central_word(&c, &v[j + 1..], out);
        }
    }

    /// Adds the expansion of `u ∧ v` for words `u`, `v`.
    pub fn words_into(&self, u: &[(usize, i64)], v: &[(usize, i64)], out: &mut [i64]) {
        for (i, &(g, a)) in u.iter().enumerate() {
            if a == 0 {
                continue;
            }
            self.left_power(g, a, v, out);
            let c = self.word_commutator(g, a, v);
            self.central_word(&c, &u[i + 1..], out);
        }
    }

    pub fn words(&self, u: &GroupWord, v: &GroupWord) -> WedgeWord {
        let mut out = vec![0; self.basis.len()];
        self.words_into(u.factors(), v.factors(), &mut out);
        WedgeWord(out)
    }

    /// Expansion of `x ∧ y` for normal-form elements.
    pub fn expand(&self, x: &Element, y: &Element) -> WedgeWord {
        let u = element_word(x);
        let v = element_word(y);
        let mut out = vec![0; self.basis.len()];
        self.words_into(&u, &v, &mut out);
        WedgeWord(out)
    }

    /// `κ*`: the `z`-vector of the commutator represented by `w`.
    pub fn kappa(&self, w: &WedgeWord) -> Vec<i64> {
        let mut c = vec![0; self.p.num_central()];
        for (s, &coef) in self.basis.gens.iter().zip(&w.0) {
            if coef == 0 {
                continue;
            }
            for (k, &x) in self.p.comm[s.i][s.j].iter().enumerate() {
                c[k] += coef * x;
            }
        }
        c
    }
}

pub(crate) fn element_word(x: &Element) -> Vec<(usize, i64)> {
    x.exponents().iter().enumerate().filter(|(_, &e)| e != 0).map(|(i, &e)| (i, e)).collect()
}

fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

/// Expansion of `x ∧ y` as a combination of basis symbols.
pub fn expand_wedge(p: &PcPresentation, x: &Element, y: &Element) -> WedgeWord {
    Expander::new(p).expand(x, y)
}
