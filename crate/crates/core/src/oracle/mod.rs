//! Brute-force exterior square on all element pairs, straight from the
//! defining relations
//!
//! ```text
//! xy ∧ z = (x^y ∧ z^y)(y ∧ z),   x ∧ yz = (x ∧ z)(x^z ∧ y^z),   x ∧ x = 1,
//! ```
//!
//! used to check the generator-level engine on small groups. Only group
//! multiplication is shared with the engine; no commutator calculus is.
//!
//! Every symbol `x ∧ y` is first rewritten onto the `n²` generator symbols
//! `g_i ∧ g_j` by peeling the last letter off one argument with one of the
//! two product relations. That is a sequence of Tietze eliminations, so the
//! group is `Z^{n²}` modulo the images of all remaining relation instances.
//! Those images are eliminated modulo `p^L`; since the group is a finite
//! `p`-group this loses nothing once `L` exceeds its exponent, which is
//! confirmed by comparing with `p^{L+1}`.

mod full;

pub use full::{full_wedge_presentation, FullWedgePresentation};

use std::collections::HashSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::lattice::{
    kernel_of_map, subgroup_quotient, AbelianPresentation, FinAbInvariants, IntMatrix, LatticeError, ModularEchelon,
};
use crate::pc::{Element, PcError, PcPresentation};
use crate::wedge::{WedgeError, WedgeOptions, WedgeSystem};

pub const DEFAULT_ORACLE_CAP: u64 = 243;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("group order {order} exceeds oracle cap {cap}")]
    CapExceeded { order: String, cap: u64 },
    #[error("invariants differ between p^{low} and p^{high}")]
    UnstableModulus { low: u32, high: u32 },
    #[error("modulus {0} too large for word arithmetic")]
    ModulusTooLarge(String),
    #[error(transparent)]
    Pc(#[from] PcError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Wedge(#[from] WedgeError),
}

/// Multiplication, inversion, and conjugation tables over all elements.
pub(crate) struct GroupTable {
    pub elements: Vec<Element>,
    pub mul: Vec<u32>,
    pub inv: Vec<u32>,
    pub size: usize,
    radix: Vec<i64>,
}

impl GroupTable {
    pub fn new(p: &PcPresentation, cap: u64) -> Result<Self, OracleError> {
        let order = p.order();
        if order > BigInt::from(cap) {
            return Err(OracleError::CapExceeded { order: order.to_string(), cap });
        }
        let elements = p.elements(cap)?;
        let size = elements.len();
        let radix = p.relative_orders().to_vec();
        let mut t = GroupTable { elements, mul: vec![0; size * size], inv: vec![0; size], size, radix };
        debug_assert!(t.elements.iter().enumerate().all(|(i, x)| t.index(x) == i));
        for a in 0..size {
            for b in 0..size {
                let c = p.multiply(&t.elements[a], &t.elements[b]);
                t.mul[a * size + b] = t.index(&c) as u32;
            }
        }
        for a in 0..size {
            t.inv[a] = (0..size).find(|&b| t.mul[a * size + b] == 0).expect("inverse exists") as u32;
        }
        Ok(t)
    }

    /// Mixed-radix position of a normal form, matching enumeration order.
    pub fn index(&self, x: &Element) -> usize {
        x.exponents().iter().zip(&self.radix).fold(0usize, |acc, (&e, &q)| acc * q as usize + e as usize)
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size + b] as usize
    }

    /// `a^b = b^-1 a b`.
    #[inline]
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv[b] as usize, a), b)
    }
}

/// Rewrites every symbol onto generator symbols modulo `p^L`.
struct Reducer<'a> {
    p: &'a PcPresentation,
    t: &'a GroupTable,
    modulus: u64,
    n: usize,
    gen_index: Vec<usize>,
    memo: Vec<Option<Box<[u64]>>>,
}

impl<'a> Reducer<'a> {
    fn new(p: &'a PcPresentation, t: &'a GroupTable, modulus: u64) -> Self {
        let n = p.num_gens();
        let gen_index = (0..n).map(|i| t.index(&p.generator(i))).collect();
        Reducer { p, t, modulus, n, gen_index, memo: vec![None; t.size * t.size] }
    }

    fn as_generator(&self, x: usize) -> Option<usize> {
        self.gen_index.iter().position(|&g| g == x)
    }

    fn last_letter(&self, x: usize) -> usize {
        let e = self.t.elements[x].exponents();
        (0..e.len()).rev().find(|&i| e[i] != 0).expect("nonidentity element")
    }

    fn add(&self, acc: &mut [u64], v: &[u64]) {
        for (a, &b) in acc.iter_mut().zip(v) {
            *a = (*a + b) % self.modulus;
        }
    }

    fn get(&mut self, x: usize, y: usize) -> Box<[u64]> {
        let key = x * self.t.size + y;
        if let Some(v) = &self.memo[key] {
            return v.clone();
        }
        let v = self.compute(x, y);
        self.memo[key] = Some(v.clone());
        v
    }

    fn compute(&mut self, x: usize, y: usize) -> Box<[u64]> {
        let mut out = vec![0u64; self.n * self.n].into_boxed_slice();
        if x == 0 || y == 0 {
            return out;
        }
        let t = self.t;
        match (self.as_generator(x), self.as_generator(y)) {
            (Some(i), Some(j)) => {
                out[i * self.n + j] = 1;
            }
            (_, None) => {
                // x ∧ y'g = (x ∧ g)(x^g ∧ y'^g)
                let k = self.last_letter(y);
                let g = self.gen_index[k];
                let y1 = t.mul(y, t.inv[g] as usize);
                let a = self.get(x, g);
                let b = self.get(t.conj(x, g), t.conj(y1, g));
                self.add(&mut out, &a);
                self.add(&mut out, &b);
            }
            (None, Some(_)) => {
                // x'g ∧ y = (x'^g ∧ y^g)(g ∧ y)
                let k = self.last_letter(x);
                let g = self.gen_index[k];
                let x1 = t.mul(x, t.inv[g] as usize);
                let a = self.get(t.conj(x1, g), t.conj(y, g));
                let b = self.get(g, y);
                self.add(&mut out, &a);
                self.add(&mut out, &b);
            }
        }
        out
    }

    fn fill(&mut self) {
        for x in 0..self.t.size {
            for y in 0..self.t.size {
                self.get(x, y);
            }
        }
        debug_assert!(self.p.num_gens() == self.n);
    }

    fn symbol(&self, x: usize, y: usize) -> &[u64] {
        self.memo[x * self.t.size + y].as_deref().expect("filled")
    }
}

/// Oracle invariants for one group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub order: u64,
    /// Exponent `L` of the working modulus `p^L` whose stability was confirmed.
    pub modulus_exponent: u32,
    pub w: FinAbInvariants,
    pub m: FinAbInvariants,
    pub m0: FinAbInvariants,
    pub b0: FinAbInvariants,
    pub relation_rows: u64,
}

#[derive(Clone, Debug)]
pub struct OracleOptions {
    pub cap: u64,
    /// Overrides the default exponent `2 max e_i + 1`.
    pub modulus_exponent: Option<u32>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { cap: DEFAULT_ORACLE_CAP, modulus_exponent: None }
    }
}

pub fn default_modulus_exponent(p: &PcPresentation) -> u32 {
    let e = (0..p.num_gens()).map(|i| p.relative_exponent(i)).max().unwrap_or(1);
    2 * e + 1
}

/// Eliminated relation rows over `n²` generator symbols at one modulus.
struct Eliminated {
    echelon: ModularEchelon,
    rows: u64,
}

fn eliminate(p: &PcPresentation, t: &GroupTable, prime: u64, exponent: u32) -> Result<(Eliminated, Vec<Vec<u64>>), OracleError> {
    let modulus = prime
        .checked_pow(exponent)
        .filter(|&m| m < (1 << 31))
        .ok_or_else(|| OracleError::ModulusTooLarge(format!("{prime}^{exponent}")))?;
    let mut red = Reducer::new(p, t, modulus);
    red.fill();
    let n2 = red.n * red.n;
    let mut ech = ModularEchelon::new(prime, exponent, n2);
    let mut row = vec![0u64; n2];
    let mut count = 0u64;
    let size = t.size;
    let m = modulus;
    let push = |ech: &mut ModularEchelon, a: &[u64], b: &[u64], c: &[u64], row: &mut [u64]| {
        let mut nonzero = false;
        for i in 0..n2 {
            let v = (a[i] + 2 * m - b[i] - c[i]) % m;
            row[i] = v;
            nonzero |= v != 0;
        }
        if nonzero {
            ech.insert_slice(row);
        }
    };
    for x in 0..size {
        ech.insert_slice(&mut red.symbol(x, x).to_vec());
        count += 1;
        for y in 0..size {
            let xy = t.mul(x, y);
            for z in 0..size {
                // xy ∧ z - x^y ∧ z^y - y ∧ z
                push(&mut ech, red.symbol(xy, z), red.symbol(t.conj(x, y), t.conj(z, y)), red.symbol(y, z), &mut row);
                // x ∧ yz - x ∧ z - x^z ∧ y^z
                push(&mut ech, red.symbol(x, t.mul(y, z)), red.symbol(x, z), red.symbol(t.conj(x, z), t.conj(y, z)), &mut row);
                count += 2;
            }
        }
    }
    // symbol images of commuting pairs
    let mut commuting: HashSet<Vec<u64>> = HashSet::new();
    for x in 0..size {
        for y in x + 1..size {
            if t.mul(x, y) == t.mul(y, x) {
                let v = red.symbol(x, y);
                if v.iter().any(|&c| c != 0) {
                    commuting.insert(v.to_vec());
                }
            }
        }
    }
    let mut commuting: Vec<Vec<u64>> = commuting.into_iter().collect();
    commuting.sort();
    Ok((Eliminated { echelon: ech, rows: count }, commuting))
}

/// Invariants of `(Z/p^L)^N / span` derived from the same span at a
/// higher power: a summand reaching `p^L` means `L` was too small.
fn truncate(inv: &FinAbInvariants, modulus: u64) -> FinAbInvariants {
    FinAbInvariants::from_cyclic_orders(&inv.as_slice().iter().map(|&d| d.min(modulus)).collect::<Vec<_>>())
}

/// Runs the brute-force computation and confirms modulus stability.
pub fn oracle(p: &PcPresentation, opts: &OracleOptions) -> Result<OracleReport, OracleError> {
    p.validate()?;
    let t = GroupTable::new(p, opts.cap)?;
    let prime = p.prime();
    let base = opts.modulus_exponent.unwrap_or_else(|| default_modulus_exponent(p));
    for l in [base, base + 2] {
        // eliminating at p^{L+1} determines the result at p^L as well
        let (elim, commuting) = eliminate(p, &t, prime, l + 1)?;
        let high = elim.echelon.quotient_invariants();
        if truncate(&high, prime.pow(l)) != truncate(&high, prime.pow(l + 1)) || high.as_slice().iter().any(|&d| d >= prime.pow(l)) {
            continue;
        }
        return finish(p, &t, elim, commuting, l);
    }
    Err(OracleError::UnstableModulus { low: base + 2, high: base + 3 })
}

fn finish(
    p: &PcPresentation,
    t: &GroupTable,
    elim: Eliminated,
    commuting: Vec<Vec<u64>>,
    l: u32,
) -> Result<OracleReport, OracleError> {
    let n = p.num_gens();
    let n2 = n * n;
    let modulus = BigInt::from(elim.echelon.modulus());
    // the exponent of the group divides p^L, so the lifted span together
    // with p^{L+1} Z^{n²} is exactly the relation lattice
    let mut rows = elim.echelon.lifted_rows();
    for i in 0..n2 {
        let mut v = vec![BigInt::from(0); n2];
        v[i] = modulus.clone();
        rows.push(v);
    }
    let relations = IntMatrix::from_big_rows(n2, rows);
    let labels: Vec<String> =
        (0..n2).map(|k| format!("{}∧{}", p.label(k / n), p.label(k % n))).collect();
    let w_pres = AbelianPresentation::new(labels, relations.clone());
    let w = w_pres.invariants()?;
    // commutator map on generator symbols, from group multiplication
    let mut kappa_rows = Vec::with_capacity(n2);
    for i in 0..n {
        for j in 0..n {
            let c = p.commutator(&p.generator(i), &p.generator(j));
            kappa_rows.push(p.z_part(&c).expect("class two"));
        }
    }
    let kappa = IntMatrix::from_rows(p.num_central(), &kappa_rows);
    let z_pres = AbelianPresentation::new(p.z_labels().to_vec(), p.z_relations());
    let m_gens = kernel_of_map(&kappa, &w_pres, &z_pres)?;
    let m0_gens: Vec<Vec<BigInt>> = commuting.iter().map(|v| v.iter().map(|&c| BigInt::from(c)).collect()).collect();
    let m = subgroup_quotient(&relations, &m_gens, &[])?;
    let m0 = subgroup_quotient(&relations, &m0_gens, &[])?;
    let b0 = subgroup_quotient(&relations, &m_gens, &m0_gens)?;
    Ok(OracleReport { order: t.size as u64, modulus_exponent: l, w, m, m0, b0, relation_rows: elim.rows })
}

/// Multiplier of the brute-force presentation.
pub fn b0_oracle(p: &PcPresentation) -> Result<FinAbInvariants, OracleError> {
    Ok(oracle(p, &OracleOptions::default())?.b0)
}

/// Schur multiplier of the brute-force presentation.
pub fn m_oracle(p: &PcPresentation) -> Result<FinAbInvariants, OracleError> {
    Ok(oracle(p, &OracleOptions::default())?.m)
}

/// Whether eliminating `rows` at `p^L` and `p^{L+1}` gives the same
/// invariants.
pub fn stability_check(rows: &[Vec<i64>], cols: usize, prime: u64, l: u32) -> bool {
    let run = |e: u32| {
        let mut ech = ModularEchelon::new(prime, e, cols);
        for r in rows {
            ech.insert_signed(r);
        }
        ech.quotient_invariants()
    };
    let low = run(l);
    let bound = (prime as u128).pow(l);
    low == run(l + 1) && low.as_slice().iter().all(|&o| (o as u128) < bound)
}

/// Oracle and engine invariants side by side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub group: String,
    pub oracle: OracleReport,
    pub engine_w: FinAbInvariants,
    pub engine_m: FinAbInvariants,
    pub engine_m0: FinAbInvariants,
    pub engine_b0: FinAbInvariants,
    pub agree: bool,
}

pub fn compare_with_engine(p: &PcPresentation, opts: &OracleOptions) -> Result<Comparison, OracleError> {
    let report = oracle(p, opts)?;
    let sys = WedgeSystem::build(p)?;
    let b = sys.bogomolov(&WedgeOptions::default())?;
    let agree = report.w == b.w_invariants
        && report.m == b.m_star_invariants
        && report.m0 == b.m0_invariants
        && report.b0 == b.invariants;
    Ok(Comparison {
        group: p.name().to_string(),
        oracle: report,
        engine_w: b.w_invariants,
        engine_m: b.m_star_invariants,
        engine_m0: b.m0_invariants,
        engine_b0: b.invariants,
        agree,
    })
}

#[cfg(test)]
mod tests;
