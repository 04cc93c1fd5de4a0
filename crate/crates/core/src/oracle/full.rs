use crate::lattice::{FinAbInvariants, ModularEchelon, SparseRow};
use crate::pc::PcPresentation;

use super::{GroupTable, OracleError};

/// The exterior square on one generator per ordered element pair, with
/// every relation instance as a sparse row. Only practical for tiny groups;
/// used to check the symbol rewriting of the main oracle.
#[derive(Clone, Debug)]
pub struct FullWedgePresentation {
    pub order: usize,
    pub prime: u64,
    pub modulus_exponent: u32,
    pub rows: Vec<SparseRow>,
}

impl FullWedgePresentation {
    pub fn num_generators(&self) -> usize {
        self.order * self.order
    }

    /// Column of the symbol `x ∧ y` for element indices `x`, `y`.
    pub fn symbol(&self, x: usize, y: usize) -> usize {
        x * self.order + y
    }

    /// Invariants modulo `p^L`.
    pub fn invariants(&self) -> FinAbInvariants {
        let mut ech = ModularEchelon::new(self.prime, self.modulus_exponent, self.num_generators());
        for r in &self.rows {
            ech.insert_sparse(r.entries());
        }
        ech.quotient_invariants()
    }
}

pub fn full_wedge_presentation(p: &PcPresentation, l: u32, cap: u64) -> Result<FullWedgePresentation, OracleError> {
    let t = GroupTable::new(p, cap)?;
    let n = t.size;
    let s = |x: usize, y: usize| x * n + y;
    let mut rows = Vec::new();
    for x in 0..n {
        let mut r = SparseRow::new();
        r.add(s(x, x), 1);
        rows.push(r);
        for y in 0..n {
            for z in 0..n {
                let mut r = SparseRow::new();
                r.add(s(t.mul(x, y), z), 1);
                r.add(s(t.conj(x, y), t.conj(z, y)), -1);
                r.add(s(y, z), -1);
                if !r.is_empty() {
                    rows.push(r);
                }
                let mut r = SparseRow::new();
                r.add(s(x, t.mul(y, z)), 1);
                r.add(s(x, z), -1);
                r.add(s(t.conj(x, z), t.conj(y, z)), -1);
                if !r.is_empty() {
                    rows.push(r);
                }
            }
        }
    }
    Ok(FullWedgePresentation { order: n, prime: p.prime(), modulus_exponent: l, rows })
}
