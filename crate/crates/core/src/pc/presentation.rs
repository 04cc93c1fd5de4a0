use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::PcError;
use crate::lattice::IntMatrix;

/// Normal-form exponent vector of a group element, `0 <= a_i < q_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(pub(crate) Vec<i64>);

impl Element {
    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Unreduced word: sequence of `(generator index, exponent)` factors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupWord(pub Vec<(usize, i64)>);

impl GroupWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn gen(i: usize) -> Self {
        GroupWord(vec![(i, 1)])
    }

    pub fn push(&mut self, g: usize, e: i64) -> &mut Self {
        if e != 0 {
            self.0.push((g, e));
        }
        self
    }

    pub fn factors(&self) -> &[(usize, i64)] {
        &self.0
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        GroupWord(v)
    }
}

/// Refined power-commutator presentation of a finite p-group of class at
/// most two.
///
/// Generators are ordered with the noncentral block first and the
/// designated-central block (`z`-block) last. Power words and commutator
/// values are stored as exponent vectors over the `z`-block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcPresentation {
    pub(crate) name: String,
    pub(crate) prime: u64,
    pub(crate) labels: Vec<String>,
    pub(crate) noncentral: usize,
    pub(crate) rel_exponents: Vec<u32>,
    pub(crate) orders: Vec<i64>,
    /// `g_i^{q_i}` as a `z`-block vector.
    pub(crate) power_words: Vec<Vec<i64>>,
    /// `comm[j][i]` is `[g_j, g_i]` as a `z`-block vector, antisymmetric.
    pub(crate) comm: Vec<Vec<Vec<i64>>>,
}

impl PcPresentation {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn num_gens(&self) -> usize {
        self.labels.len()
    }

    pub fn num_noncentral(&self) -> usize {
        self.noncentral
    }

    pub fn num_central(&self) -> usize {
        self.labels.len() - self.noncentral
    }

    pub fn is_central_gen(&self, i: usize) -> bool {
        i >= self.noncentral
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Relative order `q_i = p^{e_i}`.
    pub fn relative_order(&self, i: usize) -> i64 {
        self.orders[i]
    }

    pub fn relative_exponent(&self, i: usize) -> u32 {
        self.rel_exponents[i]
    }

    pub fn relative_orders(&self) -> &[i64] {
        &self.orders
    }

    /// `z`-block vector of `g_i^{q_i}`.
    pub fn power_word(&self, i: usize) -> &[i64] {
        &self.power_words[i]
    }

    /// `z`-block vector of `[g_i, g_j]` for any pair of generators.
    pub fn commutator_word(&self, i: usize, j: usize) -> &[i64] {
        &self.comm[i][j]
    }

    /// `|G| = prod q_i`.
    pub fn order(&self) -> BigInt {
        self.orders.iter().map(|&q| BigInt::from(q)).product()
    }

    /// `|G|` as u64 when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.orders.iter().try_fold(1u64, |acc, &q| acc.checked_mul(q as u64))
    }

    pub fn z_labels(&self) -> &[String] {
        &self.labels[self.noncentral..]
    }

    /// Relation matrix of the `z`-block as an abelian group: row `k` is
    /// `q_k e_k - powerword_k`.
    pub fn z_relations(&self) -> IntMatrix {
        let t = self.num_central();
        let mut m = IntMatrix::zeros(t, t);
        for k in 0..t {
            let g = self.noncentral + k;
            m[(k, k)] = BigInt::from(self.orders[g]);
            for (l, &w) in self.power_words[g].iter().enumerate() {
                m[(k, l)] -= BigInt::from(w);
            }
        }
        m
    }

    pub fn identity(&self) -> Element {
        Element(vec![0; self.num_gens()])
    }

    pub fn generator(&self, i: usize) -> Element {
        let mut v = vec![0; self.num_gens()];
        v[i] = 1;
        self.normalize(v)
    }

    /// Element built from exponents, reduced to normal form.
    pub fn element(&self, exps: &[i64]) -> Result<Element, PcError> {
        if exps.len() != self.num_gens() {
            return Err(PcError::IndexOutOfRange(exps.len()));
        }
        self.collect(&GroupWord(exps.iter().enumerate().map(|(i, &e)| (i, e)).collect()))
    }

    /// Element of the `z`-block with the given exponent vector.
    pub fn z_element(&self, z: &[i64]) -> Element {
        assert_eq!(z.len(), self.num_central());
        let mut v = vec![0; self.num_gens()];
        v[self.noncentral..].copy_from_slice(z);
        self.normalize(v)
    }

    /// `z`-block coordinates of an element lying in the `z`-block span.
    pub fn z_part(&self, x: &Element) -> Option<Vec<i64>> {
        if x.0[..self.noncentral].iter().any(|&a| a != 0) {
            return None;
        }
        Some(x.0[self.noncentral..].to_vec())
    }

    /// Renders an element as a generator word, e.g. `a b^2 c`.
    pub fn format_element(&self, x: &Element) -> String {
        let parts: Vec<String> = x
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| if e == 1 { self.labels[i].clone() } else { format!("{}^{}", self.labels[i], e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    pub fn format_z_word(&self, z: &[i64]) -> String {
        let mut v = vec![0; self.num_gens()];
        v[self.noncentral..].copy_from_slice(z);
        self.format_element(&Element(v))
    }

    /// Copy with generators renamed; panics on a length mismatch.
    pub fn with_labels<S: AsRef<str>>(&self, labels: &[S]) -> PcPresentation {
        assert_eq!(labels.len(), self.num_gens());
        let mut p = self.clone();
        p.labels = labels.iter().map(|s| s.as_ref().to_string()).collect();
        p
    }

    fn canonical_form(&self) -> CanonicalForm {
        let n = self.num_gens();
        let mut commutators = BTreeMap::new();
        for j in 0..n {
            for i in 0..j {
                if self.comm[j][i].iter().any(|&x| x != 0) {
                    commutators.insert(format!("{},{}", self.labels[j], self.labels[i]), self.comm[j][i].clone());
                }
            }
        }
        let mut powers = BTreeMap::new();
        for i in 0..n {
            if self.power_words[i].iter().any(|&x| x != 0) {
                powers.insert(self.labels[i].clone(), self.power_words[i].clone());
            }
        }
        CanonicalForm {
            central: self.z_labels().to_vec(),
            commutators,
            labels: self.labels.clone(),
            orders: self.orders.clone(),
            powers,
            prime: self.prime,
        }
    }

    /// Stable cache key: SHA-256 over the presentation serialized with
    /// fields in sorted order. The group name is not part of the key.
    pub fn canonical_hash(&self) -> String {
        let json = serde_json::to_string(&self.canonical_form()).expect("canonical form serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    /// Presentation in the line-oriented text format.
    pub fn to_dsl(&self) -> String {
        let mut out = format!("group {} {{\n", if self.name.is_empty() { "G" } else { &self.name });
        out.push_str(&format!("  prime {};\n", self.prime));
        out.push_str(&format!("  gens {};\n", self.labels.join(" ")));
        if self.num_central() > 0 {
            out.push_str(&format!("  central {};\n", self.z_labels().join(" ")));
        }
        for i in 0..self.num_gens() {
            out.push_str(&format!("  order {} {};\n", self.labels[i], self.orders[i]));
        }
        for i in 0..self.num_gens() {
            if self.power_words[i].iter().any(|&x| x != 0) {
                out.push_str(&format!("  pow {} = {};\n", self.labels[i], self.format_z_word(&self.power_words[i])));
            }
        }
        for j in 0..self.num_gens() {
            for i in 0..j {
                if self.comm[j][i].iter().any(|&x| x != 0) {
                    out.push_str(&format!(
                        "  comm [{},{}] = {};\n",
                        self.labels[j],
                        self.labels[i],
                        self.format_z_word(&self.comm[j][i])
                    ));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Serialize)]
struct CanonicalForm {
    central: Vec<String>,
    commutators: BTreeMap<String, Vec<i64>>,
    labels: Vec<String>,
    orders: Vec<i64>,
    powers: BTreeMap<String, Vec<i64>>,
    prime: u64,
}

impl fmt::Display for PcPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dsl())
    }
}

/// Builds presentations from labeled relations. Words are lists of
/// `(label, exponent)` pairs.
#[derive(Clone, Debug)]
pub struct PcBuilder {
    name: String,
    prime: u64,
    noncentral: Vec<String>,
    central: Vec<String>,
    orders: BTreeMap<String, i64>,
    powers: Vec<(String, Vec<(String, i64)>)>,
    comms: Vec<(String, String, Vec<(String, i64)>)>,
}

impl PcBuilder {
    pub fn new(name: impl Into<String>, prime: u64) -> Self {
        PcBuilder {
            name: name.into(),
            prime,
            noncentral: Vec::new(),
            central: Vec::new(),
            orders: BTreeMap::new(),
            powers: Vec::new(),
            comms: Vec::new(),
        }
    }

    pub fn gen(mut self, label: &str, order: i64) -> Self {
        self.noncentral.push(label.to_string());
        self.orders.insert(label.to_string(), order);
        self
    }

    pub fn central(mut self, label: &str, order: i64) -> Self {
        self.central.push(label.to_string());
        self.orders.insert(label.to_string(), order);
        self
    }

    /// Overrides the relative order of an already declared generator.
    pub fn order(mut self, label: &str, order: i64) -> Self {
        self.orders.insert(label.to_string(), order);
        self
    }

    pub fn pow(mut self, label: &str, word: &[(&str, i64)]) -> Self {
        self.powers.push((label.to_string(), word.iter().map(|(l, e)| (l.to_string(), *e)).collect()));
        self
    }

    /// Declares `[x, y] = word`.
    pub fn comm(mut self, x: &str, y: &str, word: &[(&str, i64)]) -> Self {
        self.comms.push((x.to_string(), y.to_string(), word.iter().map(|(l, e)| (l.to_string(), *e)).collect()));
        self
    }

    /// Assembles and validates the presentation.
    pub fn build(self) -> Result<PcPresentation, PcError> {
        let p = self.assemble()?;
        p.validate()?;
        Ok(p)
    }

    /// Assembles without the consistency check (structural checks only).
    pub fn assemble(self) -> Result<PcPresentation, PcError> {
        if !is_prime(self.prime) {
            return Err(PcError::NotPrime(self.prime));
        }
        let labels: Vec<String> = self.noncentral.iter().chain(&self.central).cloned().collect();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(PcError::DuplicateGenerator(l.clone()));
            }
        }
        let n = labels.len();
        let m = self.noncentral.len();
        let t = n - m;
        let index = |l: &str| labels.iter().position(|x| x == l).ok_or_else(|| PcError::UnknownGenerator(l.to_string()));
        let mut orders = Vec::with_capacity(n);
        let mut rel_exponents = Vec::with_capacity(n);
        for l in &labels {
            let q = *self.orders.get(l).unwrap_or(&(self.prime as i64));
            let e = prime_power_exponent(q, self.prime).ok_or(PcError::BadRelativeOrder { label: l.clone(), order: q })?;
            orders.push(q);
            rel_exponents.push(e);
        }
        let z_vector = |word: &[(String, i64)], context: &str| -> Result<Vec<i64>, PcError> {
            let mut v = vec![0i64; t];
            for (l, e) in word {
                let g = index(l)?;
                if g < m {
                    return Err(PcError::NotRefined(format!("{context} uses noncentral generator {l}")));
                }
                v[g - m] += e;
            }
            Ok(v)
        };
        let mut power_words = vec![vec![0i64; t]; n];
        for (l, word) in &self.powers {
            let g = index(l)?;
            power_words[g] = z_vector(word, &format!("power word of {l}"))?;
        }
        let mut comm = vec![vec![vec![0i64; t]; n]; n];
        for (x, y, word) in &self.comms {
            let (a, b) = (index(x)?, index(y)?);
            if a == b {
                return Err(PcError::Malformed(format!("commutator [{x},{y}] of a generator with itself")));
            }
            let v = z_vector(word, &format!("commutator [{x},{y}]"))?;
            if (a >= m || b >= m) && v.iter().any(|&e| e != 0) {
                return Err(PcError::ClassTooHigh(format!("central generator in nontrivial commutator [{x},{y}]")));
            }
            comm[a][b] = v.clone();
            comm[b][a] = v.iter().map(|e| -e).collect();
        }
        Ok(PcPresentation {
            name: self.name,
            prime: self.prime,
            labels,
            noncentral: m,
            rel_exponents,
            orders,
            power_words,
            comm,
        })
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

pub(crate) fn prime_power_exponent(q: i64, p: u64) -> Option<u32> {
    if q < p as i64 {
        return None;
    }
    let mut q = q as u64;
    let mut e = 0;
    while q.is_multiple_of(p) {
        q /= p;
        e += 1;
    }
    (q == 1).then_some(e)
}
