//! Row echelon forms over `Z/p^L`, used for relation systems too large for
//! exact integer elimination. All torsion in this crate is `p`-primary, so
//! working modulo a large enough prime power loses nothing; callers confirm
//! this by recomputing at a higher power.

use num_bigint::BigInt;

use super::abelian::FinAbInvariants;

#[derive(Clone, Debug)]
pub struct ModularEchelon {
    prime: u64,
    exponent: u32,
    modulus: u64,
    cols: usize,
    rows: Vec<Option<Vec<u64>>>,
    vals: Vec<u32>,
}

impl ModularEchelon {
    pub fn new(prime: u64, exponent: u32, cols: usize) -> Self {
        let modulus = prime.checked_pow(exponent).expect("modulus overflow");
        assert!(modulus < (1u64 << 31), "modulus must stay below 2^31");
        ModularEchelon { prime, exponent, modulus, cols, rows: vec![None; cols], vals: vec![0; cols] }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.iter().filter(|r| r.is_some()).count()
    }

    /// Reduces a signed integer row modulo `p^L` and inserts it.
    pub fn insert_signed(&mut self, row: &[i64]) {
        let m = self.modulus as i64;
        let r: Vec<u64> = row.iter().map(|&x| x.rem_euclid(m) as u64).collect();
        self.insert(r);
    }

    pub fn insert_sparse(&mut self, entries: &[(usize, i64)]) {
        let m = self.modulus as i64;
        let mut r = vec![0u64; self.cols];
        for &(c, x) in entries {
            r[c] = (r[c] + x.rem_euclid(m) as u64) % self.modulus;
        }
        self.insert(r);
    }

    /// Inserts a row whose entries are already reduced modulo `p^L`.
    pub fn insert(&mut self, mut cur: Vec<u64>) {
        self.insert_slice(&mut cur);
    }

    /// Like [`ModularEchelon::insert`] but reduces `cur` in place, copying
    /// it only when a new pivot is stored. Returns whether the span grew.
    pub fn insert_slice(&mut self, cur: &mut [u64]) -> bool {
        debug_assert_eq!(cur.len(), self.cols);
        let mut grew = false;
        let m = self.modulus;
        let mut c = 0;
        let mut owned: Option<Vec<u64>> = None;
        loop {
            let row: &mut [u64] = match owned.as_mut() {
                Some(v) => v,
                None => cur,
            };
            while c < self.cols && row[c] == 0 {
                c += 1;
            }
            if c == self.cols {
                return grew;
            }
            let v = self.valuation(row[c]);
            match &self.rows[c] {
                None => {
                    let mut keep = row.to_vec();
                    self.normalize(&mut keep, c, v);
                    self.rows[c] = Some(keep);
                    self.vals[c] = v;
                    return true;
                }
                Some(piv) if v >= self.vals[c] => {
                    let k = row[c] / self.prime.pow(self.vals[c]);
                    for j in c..self.cols {
                        if piv[j] != 0 {
                            row[j] = (row[j] + m - (k * piv[j]) % m) % m;
                        }
                    }
                    debug_assert_eq!(row[c], 0);
                    c += 1;
                }
                Some(_) => {
                    let mut keep = row.to_vec();
                    self.normalize(&mut keep, c, v);
                    let old = self.rows[c].replace(keep).expect("pivot present");
                    self.vals[c] = v;
                    owned = Some(old);
                    grew = true;
                }
            }
        }
    }

    fn valuation(&self, mut x: u64) -> u32 {
        let mut v = 0;
        while x.is_multiple_of(self.prime) {
            x /= self.prime;
            v += 1;
        }
        v
    }

    /// Scales `row` so that `row[c] == p^v`.
    fn normalize(&self, row: &mut [u64], c: usize, v: u32) {
        let unit = row[c] / self.prime.pow(v);
        let inv = mod_inverse(unit, self.modulus);
        for x in row.iter_mut() {
            *x = (*x * inv) % self.modulus;
        }
        debug_assert_eq!(row[c], self.prime.pow(v));
    }

    /// Invariants of `(Z/p^L)^cols / rowspan`. A summand equal to `p^L`
    /// means the modulus is saturated in that direction.
    pub fn quotient_invariants(&self) -> FinAbInvariants {
        let mut mat: Vec<Vec<u64>> = self.rows.iter().flatten().cloned().collect();
        let vals = local_smith_valuations(&mut mat, self.cols, self.prime, self.modulus);
        let mut orders = Vec::with_capacity(self.cols);
        for i in 0..self.cols {
            let v = vals.get(i).copied().unwrap_or(self.exponent);
            orders.push(self.prime.pow(v));
        }
        FinAbInvariants::from_cyclic_orders(&orders)
    }

    /// Whether some quotient summand reaches the full modulus.
    pub fn saturated(&self) -> bool {
        self.quotient_invariants().as_slice().contains(&self.modulus)
    }

    /// Stored rows as integers. Together with `p^L · e_i` they generate
    /// the integer lift of the row span.
    pub fn lifted_rows(&self) -> Vec<Vec<BigInt>> {
        self.rows
            .iter()
            .flatten()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    /// Merges another echelon over the same ring.
    pub fn absorb(&mut self, other: ModularEchelon) {
        assert_eq!((self.modulus, self.cols), (other.modulus, other.cols));
        for r in other.rows.into_iter().flatten() {
            self.insert(r);
        }
    }
}

/// Smith diagonal valuations of a matrix over the local ring `Z/p^L`.
fn local_smith_valuations(mat: &mut [Vec<u64>], cols: usize, p: u64, m: u64) -> Vec<u32> {
    let rows = mat.len();
    let val = |x: u64| -> u32 {
        let mut x = x;
        let mut v = 0;
        while x.is_multiple_of(p) {
            x /= p;
            v += 1;
        }
        v
    };
    let mut out = Vec::new();
    for k in 0..rows.min(cols) {
        let mut best: Option<(usize, usize, u32)> = None;
        for (i, row) in mat.iter().enumerate().skip(k) {
            for (j, &x) in row.iter().enumerate().skip(k) {
                if x == 0 {
                    continue;
                }
                let v = val(x);
                if best.is_none_or(|b| v < b.2) {
                    best = Some((i, j, v));
                }
            }
        }
        let Some((bi, bj, v)) = best else { break };
        mat.swap(k, bi);
        for row in mat.iter_mut() {
            row.swap(k, bj);
        }
        let unit = mat[k][k] / p.pow(v);
        let inv = mod_inverse(unit, m);
        for x in mat[k].iter_mut() {
            *x = (*x * inv) % m;
        }
        let pv = p.pow(v);
        let pivot_row = mat[k].clone();
        for row in mat.iter_mut().skip(k + 1) {
            if row[k] == 0 {
                continue;
            }
            let f = row[k] / pv;
            for j in k..cols {
                row[j] = (row[j] + m - (f * pivot_row[j]) % m) % m;
            }
        }
        // column clearing only touches the pivot row once rows below are zero
        for j in k + 1..cols {
            mat[k][j] = 0;
        }
        out.push(v);
    }
    out
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    assert_eq!(old_r, 1, "not a unit modulo {m}");
    old_s.rem_euclid(m as i128) as u64
}
