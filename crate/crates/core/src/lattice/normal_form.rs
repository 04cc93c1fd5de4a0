//! Hermite and Smith normal forms over the integers, plus an incremental
//! echelon basis for integer row lattices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Row-style Hermite normal form: `u * a == h`, `u` unimodular.
#[derive(Clone, Debug)]
pub struct Hermite {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Pivot column of each nonzero row of `h`, in row order.
    pub pivots: Vec<usize>,
}

impl Hermite {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Smith normal form: `u * a * v == d`, with `d` diagonal and
/// `d[i][i] | d[i+1][i+1]`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Diagonal entries, `min(rows, cols)` of them.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d[(i, i)].clone()).collect()
    }
}

pub fn hnf(a: &IntMatrix) -> Hermite {
    let m = a.rows();
    let n = a.cols();
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            // smallest nonzero magnitude in column c at or below row r
            let best = (r..m)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&i, &j| h[(i, c)].abs().cmp(&h[(j, c)].abs()));
            let Some(best) = best else { break };
            h.swap_rows(r, best);
            u.swap_rows(r, best);
            let mut done = true;
            for i in r + 1..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = h[(i, c)].div_floor(&h[(r, c)]);
                let neg = -q;
                h.add_row_multiple(i, r, &neg);
                u.add_row_multiple(i, r, &neg);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            if !q.is_zero() {
                let neg = -q;
                h.add_row_multiple(i, r, &neg);
                u.add_row_multiple(i, r, &neg);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Hermite { h, u, pivots }
}

/// Smith normal form with smallest-magnitude pivoting.
pub fn snf(a: &IntMatrix) -> Smith {
    let m = a.rows();
    let n = a.cols();
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    for k in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in k..m {
                for j in k..n {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if d[(bi, bj)].abs() <= d[(i, j)].abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish_smith(d, u, v);
            };
            d.swap_rows(k, bi);
            u.swap_rows(k, bi);
            d.swap_cols(k, bj);
            v.swap_cols(k, bj);

            let mut clean = true;
            for i in k + 1..m {
                if d[(i, k)].is_zero() {
                    continue;
                }
                let q = -d[(i, k)].div_floor(&d[(k, k)]);
                d.add_row_multiple(i, k, &q);
                u.add_row_multiple(i, k, &q);
                clean &= d[(i, k)].is_zero();
            }
            for j in k + 1..n {
                if d[(k, j)].is_zero() {
                    continue;
                }
                let q = -d[(k, j)].div_floor(&d[(k, k)]);
                d.add_col_multiple(j, k, &q);
                v.add_col_multiple(j, k, &q);
                clean &= d[(k, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row and retry
            let pivot = d[(k, k)].clone();
            let offending = (k + 1..m).find(|&i| (k + 1..n).any(|j| !(&d[(i, j)] % &pivot).is_zero()));
            match offending {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(k, i, &one);
                    u.add_row_multiple(k, i, &one);
                }
                None => break,
            }
        }
        if d[(k, k)].is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
    }
    finish_smith(d, u, v)
}

fn finish_smith(d: IntMatrix, u: IntMatrix, v: IntMatrix) -> Smith {
    Smith { d, u, v }
}

/// Integer row lattice kept in Hermite-reduced echelon form, grown one
/// vector at a time.
#[derive(Clone, Debug)]
pub struct LatticeBasis {
    cols: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl LatticeBasis {
    pub fn new(cols: usize) -> Self {
        LatticeBasis { cols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_rows<I: IntoIterator<Item = Vec<BigInt>>>(cols: usize, rows: I) -> Self {
        let mut b = Self::new(cols);
        for r in rows {
            b.insert(r);
        }
        b
    }

    pub fn from_matrix(m: &IntMatrix) -> Self {
        Self::from_rows(m.cols(), m.row_vecs())
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn to_matrix(&self) -> IntMatrix {
        IntMatrix::from_big_rows(self.cols, self.rows.clone())
    }

    /// Adds `v` to the lattice; returns whether the lattice grew.
    pub fn insert(&mut self, mut v: Vec<BigInt>) -> bool {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut changed = false;
        let mut idx = 0;
        while let Some(c) = v.iter().position(|x| !x.is_zero()) {
            while idx < self.rows.len() && self.pivots[idx] < c {
                idx += 1;
            }
            if idx == self.rows.len() || self.pivots[idx] > c {
                if v[c].is_negative() {
                    v.iter_mut().for_each(|x| *x = -x.clone());
                }
                self.rows.insert(idx, v);
                self.pivots.insert(idx, c);
                changed = true;
                break;
            }
            let p = self.rows[idx][c].clone();
            let a = v[c].clone();
            if (&a % &p).is_zero() {
                let q = &a / &p;
                sub_scaled(&mut v, &self.rows[idx], &q);
            } else {
                let eg = p.extended_gcd(&a);
                let (mut g, mut s, mut t) = (eg.gcd, eg.x, eg.y);
                if g.is_negative() {
                    g = -g;
                    s = -s;
                    t = -t;
                }
                let row = &self.rows[idx];
                let new_row: Vec<BigInt> = row.iter().zip(&v).map(|(r, x)| &s * r + &t * x).collect();
                let pg = &p / &g;
                let ag = &a / &g;
                let rest: Vec<BigInt> = row.iter().zip(&v).map(|(r, x)| &pg * x - &ag * r).collect();
                self.rows[idx] = new_row;
                v = rest;
                changed = true;
            }
            debug_assert!(v[c].is_zero());
        }
        if changed {
            self.reduce_above();
        }
        changed
    }

    fn reduce_above(&mut self) {
        for i in 0..self.rows.len() {
            let c = self.pivots[i];
            let (head, tail) = self.rows.split_at_mut(i);
            let piv_row = &tail[0];
            for r in head.iter_mut() {
                let q = r[c].div_floor(&piv_row[c]);
                if !q.is_zero() {
                    sub_scaled(r, piv_row, &q);
                }
            }
        }
    }

    /// Coefficients `y` with `y · basis == v`, if `v` is in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut rem = v.to_vec();
        let mut y = vec![BigInt::zero(); self.rows.len()];
        for (i, row) in self.rows.iter().enumerate() {
            let c = self.pivots[i];
            if rem[c].is_zero() {
                continue;
            }
            let (q, r) = rem[c].div_rem(&row[c]);
            if !r.is_zero() {
                return None;
            }
            sub_scaled(&mut rem, row, &q);
            y[i] = q;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(y)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Lattice equality (both reduced bases are canonical).
    pub fn same_lattice(&self, other: &LatticeBasis) -> bool {
        self.rows == other.rows
    }

    /// Index of a full-rank lattice in `Z^cols`; `None` when not full rank.
    pub fn index(&self) -> Option<BigInt> {
        if self.rows.len() != self.cols {
            return None;
        }
        Some(self.rows.iter().enumerate().map(|(i, r)| r[self.pivots[i]].clone()).product())
    }

    pub fn intersection(&self, other: &LatticeBasis) -> LatticeBasis {
        assert_eq!(self.cols, other.cols);
        let k = self.rows.len();
        if k == 0 || other.rows.is_empty() {
            return LatticeBasis::new(self.cols);
        }
        // x·A = y·B  <=>  (x, -y) in the left kernel of [A; B]
        let stacked = IntMatrix::from_big_rows(self.cols, self.rows.iter().chain(&other.rows).cloned().collect());
        let h = hnf(&stacked);
        let mut out = LatticeBasis::new(self.cols);
        for i in h.rank()..stacked.rows() {
            let x = &h.u.row(i)[..k];
            let mut v = vec![BigInt::zero(); self.cols];
            for (c, r) in x.iter().zip(&self.rows) {
                if !c.is_zero() {
                    sub_scaled(&mut v, r, &-c);
                }
            }
            out.insert(v);
        }
        out
    }
}

fn sub_scaled(v: &mut [BigInt], row: &[BigInt], q: &BigInt) {
    for (x, r) in v.iter_mut().zip(row) {
        if !r.is_zero() {
            *x -= q * r;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(cols: usize, rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(cols, rows)
    }

    fn diag_of(a: &IntMatrix) -> Vec<i64> {
        snf(a).diagonal().iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn snf_diag_2_3() {
        assert_eq!(diag_of(&IntMatrix::diag(&[2, 3])), vec![1, 6]);
    }

    #[test]
    fn snf_zero() {
        let z = IntMatrix::zeros(3, 3);
        let s = snf(&z);
        assert!(s.d.is_zero());
    }

    #[test]
    fn snf_2_4_6_8() {
        // gcd of entries is 2 and |det| = |16 - 24| = 8, so d = (2, 4)
        let a = m(2, &[vec![2, 4], vec![6, 8]]);
        let s = snf(&a);
        assert_eq!(diag_of(&a), vec![2, 4]);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
        assert_eq!(s.u.determinant().abs(), BigInt::one());
        assert_eq!(s.v.determinant().abs(), BigInt::one());
    }

    #[test]
    fn hnf_relation() {
        let a = m(3, &[vec![3, 6, 9], vec![2, 4, 5], vec![1, 0, 1], vec![0, 0, 0]]);
        let h = hnf(&a);
        assert_eq!(h.u.mul(&a), h.h);
        assert_eq!(h.u.determinant().abs(), BigInt::one());
        assert_eq!(h.rank(), 3);
        for (r, &c) in h.pivots.iter().enumerate() {
            assert!(h.h[(r, c)].is_positive());
            for i in 0..r {
                assert!(h.h[(i, c)] >= BigInt::zero() && h.h[(i, c)] < h.h[(r, c)]);
            }
        }
    }

    #[test]
    fn lattice_basis_matches_hnf() {
        let rows = vec![vec![4, 6, 0], vec![0, 9, 3], vec![2, 1, 1], vec![6, 7, 1]];
        let a = m(3, &rows);
        let h = hnf(&a);
        let b = LatticeBasis::from_matrix(&a);
        assert_eq!(b.rank(), h.rank());
        let hb: Vec<Vec<BigInt>> = (0..h.rank()).map(|i| h.h.row(i).to_vec()).collect();
        assert_eq!(b.basis(), &hb[..]);
    }

    #[test]
    fn lattice_membership() {
        let b = LatticeBasis::from_rows(2, vec![vec![BigInt::from(3), BigInt::zero()], vec![BigInt::zero(), BigInt::from(9)]]);
        assert!(b.contains(&[BigInt::from(6), BigInt::from(-9)]));
        assert!(!b.contains(&[BigInt::from(1), BigInt::zero()]));
        assert_eq!(b.index(), Some(BigInt::from(27)));
    }

    #[test]
    fn intersection_of_lattices() {
        let b = |rows: &[Vec<i64>]| LatticeBasis::from_matrix(&m(2, rows));
        let a = b(&[vec![2, 0], vec![0, 3]]);
        let c = b(&[vec![1, 1], vec![0, 6]]);
        let i = a.intersection(&c);
        for x in -12i64..=12 {
            for y in -12i64..=12 {
                let v = vec![BigInt::from(x), BigInt::from(y)];
                assert_eq!(i.contains(&v), a.contains(&v) && c.contains(&v), "{x} {y}");
            }
        }
        assert!(a.intersection(&LatticeBasis::new(2)).rank() == 0);
    }
}
