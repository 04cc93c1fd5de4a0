use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{is_zero_vec, IntMatrix};
use super::normal_form::{hnf, snf, LatticeBasis};
use super::LatticeError;

/// Torsion coefficients `d1 | d2 | ... | dk`, all greater than one.
/// The empty list is the trivial group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FinAbInvariants(Vec<u64>);

impl FinAbInvariants {
    pub fn trivial() -> Self {
        FinAbInvariants(Vec::new())
    }

    /// Canonical invariants of the direct sum of cyclic groups of the given
    /// orders (entries may be 1 and need not form a chain).
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let d = snf(&IntMatrix::diag(orders));
        Self::from_diagonal(&d.diagonal()).expect("cyclic orders are finite")
    }

    /// Builds invariants from an SNF diagonal; zero entries mean free rank.
    pub(crate) fn from_diagonal(diag: &[BigInt]) -> Result<Self, LatticeError> {
        let mut out = Vec::new();
        for d in diag {
            if d.is_zero() {
                return Err(LatticeError::InfiniteGroup);
            }
            if !d.abs().is_one() {
                out.push(d.abs().to_u64().ok_or(LatticeError::Overflow)?);
            }
        }
        out.sort_unstable();
        Ok(FinAbInvariants(out))
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }

    pub fn order(&self) -> BigInt {
        self.0.iter().map(|&d| BigInt::from(d)).product()
    }

    /// Invariants of the direct product of two groups.
    pub fn product(&self, other: &FinAbInvariants) -> FinAbInvariants {
        let mut all = self.0.clone();
        all.extend_from_slice(&other.0);
        Self::from_cyclic_orders(&all)
    }

    pub fn is_chain(&self) -> bool {
        self.0.windows(2).all(|w| w[1] % w[0] == 0) && self.0.iter().all(|&d| d > 1)
    }
}

impl From<Vec<u64>> for FinAbInvariants {
    fn from(v: Vec<u64>) -> Self {
        FinAbInvariants::from_cyclic_orders(&v)
    }
}

impl fmt::Display for FinAbInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Cokernel of an integer relation matrix: torsion part plus free rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cokernel {
    pub torsion: FinAbInvariants,
    pub free_rank: usize,
}

impl Cokernel {
    pub fn finite(self) -> Result<FinAbInvariants, LatticeError> {
        if self.free_rank > 0 {
            Err(LatticeError::InfiniteGroup)
        } else {
            Ok(self.torsion)
        }
    }
}

/// Cokernel of `Z^cols / rowspan(relations)`.
pub fn cokernel(relations: &IntMatrix) -> Cokernel {
    let n = relations.cols();
    let d = snf(relations).diagonal();
    let mut torsion = Vec::new();
    let mut rank = 0;
    for x in &d {
        if !x.is_zero() {
            rank += 1;
            if !x.abs().is_one() {
                torsion.push(x.abs().to_u64().expect("torsion coefficient fits in u64"));
            }
        }
    }
    torsion.sort_unstable();
    Cokernel { torsion: FinAbInvariants(torsion), free_rank: n - rank }
}

/// Finitely generated abelian group `<labels | relations>`; each relation row
/// is a vector over the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianPresentation {
    labels: Vec<String>,
    relations: IntMatrix,
    relation_labels: Vec<String>,
}

impl AbelianPresentation {
    pub fn new(labels: Vec<String>, relations: IntMatrix) -> Self {
        assert_eq!(labels.len(), relations.cols(), "one label per generator");
        let relation_labels = (0..relations.rows()).map(|i| format!("r{i}")).collect();
        AbelianPresentation { labels, relations, relation_labels }
    }

    pub fn with_relation_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.relations.rows());
        self.relation_labels = labels;
        self
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn num_generators(&self) -> usize {
        self.labels.len()
    }

    pub fn cokernel(&self) -> Cokernel {
        cokernel(&self.relations)
    }

    /// Invariants of the presented group, which must be finite.
    pub fn invariants(&self) -> Result<FinAbInvariants, LatticeError> {
        self.cokernel().finite()
    }

    pub fn relation_lattice(&self) -> LatticeBasis {
        LatticeBasis::from_matrix(&self.relations)
    }

    /// Renders `v` as `c1·g1 + c2·g2 ...` over the generator labels.
    pub fn format_vector(&self, v: &[BigInt]) -> String {
        format_combination(&self.labels, v)
    }

    /// Debug dump: one relation per line, `label: c1·g1 + ...`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for i in 0..self.relations.rows() {
            out.push_str(&self.relation_labels[i]);
            out.push_str(": ");
            out.push_str(&self.format_vector(self.relations.row(i)));
            out.push('\n');
        }
        out
    }
}

pub fn format_combination(labels: &[String], v: &[BigInt]) -> String {
    let mut parts = Vec::new();
    for (c, l) in v.iter().zip(labels) {
        if c.is_zero() {
            continue;
        }
        let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
        let term = if mag.is_one() { l.clone() } else { format!("{mag}·{l}") };
        if parts.is_empty() {
            parts.push(if sign == "-" { format!("-{term}") } else { term });
        } else {
            parts.push(format!("{sign} {term}"));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" ")
    }
}

/// Invariants of the cokernel of `r`, asserting finiteness.
pub fn invariants(r: &AbelianPresentation) -> Result<FinAbInvariants, LatticeError> {
    r.invariants()
}

/// Generators (in source coordinates) of the kernel of the homomorphism of
/// presented groups induced by `f`, whose row `i` is the image of source
/// generator `i` in target coordinates.
///
/// The returned lattice contains the source relation lattice, so it is the
/// full preimage of the target relations.
pub fn kernel_of_map(
    f: &IntMatrix,
    source: &AbelianPresentation,
    target: &AbelianPresentation,
) -> Result<Vec<Vec<BigInt>>, LatticeError> {
    let s = source.num_generators();
    let t = target.num_generators();
    if f.rows() != s || f.cols() != t {
        return Err(LatticeError::DimensionMismatch { expected: (s, t), found: (f.rows(), f.cols()) });
    }
    let target_lattice = target.relation_lattice();
    for i in 0..source.relations.rows() {
        let image = f.left_mul_vec(source.relations.row(i));
        if !target_lattice.contains(&image) {
            return Err(LatticeError::NotWellDefined { relation: i });
        }
    }
    let stacked = f.stack(target.relations());
    let h = hnf(&stacked);
    let mut gens = Vec::new();
    for i in h.rank()..stacked.rows() {
        let v: Vec<BigInt> = h.u.row(i)[..s].to_vec();
        if !is_zero_vec(&v) {
            gens.push(v);
        }
    }
    for g in &gens {
        let image = f.left_mul_vec(g);
        if !target_lattice.contains(&image) {
            return Err(LatticeError::NotWellDefined { relation: usize::MAX });
        }
    }
    Ok(gens)
}

/// Invariants of `(<num> + R) / (<den> + R)` inside `Z^cols`.
pub fn subgroup_quotient(
    relations: &IntMatrix,
    num: &[Vec<BigInt>],
    den: &[Vec<BigInt>],
) -> Result<FinAbInvariants, LatticeError> {
    let cols = relations.cols();
    let mut numerator = LatticeBasis::from_matrix(relations);
    for v in num {
        numerator.insert(v.clone());
    }
    quotient_in_basis(&numerator, relations, den, cols)
}

/// Same as [`subgroup_quotient`] when the numerator lattice (already
/// containing the relations) has been built incrementally.
pub fn quotient_in_basis(
    numerator: &LatticeBasis,
    relations: &IntMatrix,
    den: &[Vec<BigInt>],
    cols: usize,
) -> Result<FinAbInvariants, LatticeError> {
    let k = numerator.rank();
    let mut coords = Vec::new();
    for v in den.iter().cloned().chain(relations.row_vecs()) {
        assert_eq!(v.len(), cols);
        match numerator.coordinates(&v) {
            Some(y) => coords.push(y),
            None => return Err(LatticeError::NotASubgroup),
        }
    }
    if k == 0 {
        return Ok(FinAbInvariants::trivial());
    }
    let m = IntMatrix::from_big_rows(k, coords);
    cokernel(&m).finite()
}

/// Solves `x · a == b`; `None` when `b` is not in the row lattice of `a`.
pub fn solve_membership(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.cols(), b.len());
    let h = hnf(a);
    let mut rem = b.to_vec();
    let mut y = vec![BigInt::zero(); h.rank()];
    for (i, &c) in h.pivots.iter().enumerate() {
        if rem[c].is_zero() {
            continue;
        }
        let piv = &h.h[(i, c)];
        if !(&rem[c] % piv).is_zero() {
            return None;
        }
        let q = &rem[c] / piv;
        for (j, r) in rem.iter_mut().enumerate() {
            let e = &h.h[(i, j)];
            if !e.is_zero() {
                *r -= &q * e;
            }
        }
        y[i] = q;
    }
    if !is_zero_vec(&rem) {
        return None;
    }
    let mut x = vec![BigInt::zero(); a.rows()];
    for (i, yi) in y.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        for (j, xj) in x.iter_mut().enumerate() {
            let u = &h.u[(i, j)];
            if !u.is_zero() {
                *xj += yi * u;
            }
        }
    }
    Some(x)
}

/// Order of `Z^cols / rowspan(m)`, or `None` if infinite.
pub fn cokernel_order(m: &IntMatrix) -> Option<BigInt> {
    let c = cokernel(m);
    if c.free_rank > 0 {
        None
    } else {
        Some(c.torsion.order())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::matrix::big_vec;

    fn pres(labels: &[&str], rows: &[Vec<i64>]) -> AbelianPresentation {
        AbelianPresentation::new(
            labels.iter().map(|s| s.to_string()).collect(),
            IntMatrix::from_rows(labels.len(), rows),
        )
    }

    #[test]
    fn invariants_examples() {
        assert_eq!(pres(&["x", "y"], &[vec![3, 0], vec![0, 3]]).invariants().unwrap().as_slice(), &[3, 3]);
        assert!(pres(&["x", "y", "z"], &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).invariants().unwrap().is_trivial());
        // C9 quotient by <3>: relations 9x and 3x
        assert_eq!(pres(&["x"], &[vec![9], vec![3]]).invariants().unwrap().as_slice(), &[3]);
        assert_eq!(pres(&["x", "y"], &[vec![3, 0]]).invariants(), Err(LatticeError::InfiniteGroup));
    }

    #[test]
    fn kernel_identity_on_c3_is_trivial() {
        let c3 = pres(&["x"], &[vec![3]]);
        let f = IntMatrix::identity(1);
        let k = kernel_of_map(&f, &c3, &c3).unwrap();
        let q = subgroup_quotient(c3.relations(), &k, &[]).unwrap();
        assert!(q.is_trivial());
    }

    #[test]
    fn kernel_c9_to_c3() {
        let c9 = pres(&["x"], &[vec![9]]);
        let c3 = pres(&["y"], &[vec![3]]);
        let f = IntMatrix::identity(1);
        let k = kernel_of_map(&f, &c9, &c3).unwrap();
        let q = subgroup_quotient(c9.relations(), &k, &[]).unwrap();
        assert_eq!(q.as_slice(), &[3]);
        // the kernel lattice is 3Z
        let b = LatticeBasis::from_rows(1, k);
        assert_eq!(b.basis(), &[big_vec(&[3])]);
    }

    #[test]
    fn kernel_rejects_ill_defined_map() {
        let c3 = pres(&["x"], &[vec![3]]);
        let c9 = pres(&["y"], &[vec![9]]);
        let f = IntMatrix::identity(1);
        assert!(matches!(kernel_of_map(&f, &c3, &c9), Err(LatticeError::NotWellDefined { .. })));
    }

    #[test]
    fn subgroup_quotient_examples() {
        let r = IntMatrix::diag(&[9, 9]);
        let g = vec![big_vec(&[1, 2])];
        assert!(subgroup_quotient(&r, &g, &g).unwrap().is_trivial());
        let q = subgroup_quotient(&r, &[big_vec(&[1, 0])], &[big_vec(&[3, 0])]).unwrap();
        assert_eq!(q.as_slice(), &[3]);
        assert_eq!(
            subgroup_quotient(&r, &[big_vec(&[3, 0])], &[big_vec(&[1, 0])]),
            Err(LatticeError::NotASubgroup)
        );
    }

    #[test]
    fn synthetic_nontrivial_quotient() {
        // Z^2 / <(3,0),(0,9)>
        let r = IntMatrix::from_rows(2, &[vec![3, 0], vec![0, 9]]);
        let num = vec![big_vec(&[1, 0]), big_vec(&[0, 1])];
        assert_eq!(subgroup_quotient(&r, &num, &[]).unwrap().as_slice(), &[3, 9]);
    }

    #[test]
    fn membership() {
        let a = IntMatrix::from_rows(3, &[vec![2, 4, 0], vec![0, 3, 3], vec![1, 1, 1]]);
        let first = a.row(0).to_vec();
        let x = solve_membership(&a, &first).unwrap();
        assert_eq!(a.left_mul_vec(&x), first);
        let zero = vec![BigInt::zero(); 3];
        assert_eq!(solve_membership(&a, &zero).unwrap(), vec![BigInt::zero(); 3]);
        let b = IntMatrix::from_rows(2, &[vec![2, 0], vec![0, 2]]);
        assert!(solve_membership(&b, &big_vec(&[1, 0])).is_none());
    }

    #[test]
    fn dump_format() {
        let p = pres(&["a", "b"], &[vec![3, -1], vec![0, 9]]);
        assert_eq!(p.dump(), "r0: 3·a - b\nr1: 9·b\n");
    }

    #[test]
    fn product_merges() {
        let a = FinAbInvariants::from(vec![3]);
        let b = FinAbInvariants::from(vec![3, 9]);
        assert_eq!(a.product(&b).as_slice(), &[3, 3, 9]);
        let c = FinAbInvariants::from(vec![2, 3]);
        assert_eq!(c.as_slice(), &[6]);
    }
}
