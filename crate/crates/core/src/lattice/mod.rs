//! Exact integer-matrix algebra over finitely generated abelian groups.

mod abelian;
mod matrix;
mod modular;
mod normal_form;

pub use abelian::{
    cokernel, cokernel_order, format_combination, invariants, kernel_of_map, quotient_in_basis,
    solve_membership, subgroup_quotient, AbelianPresentation, Cokernel, FinAbInvariants,
};
pub use matrix::{IntMatrix, SparseRow};
pub use modular::ModularEchelon;
pub use normal_form::{hnf, snf, Hermite, LatticeBasis, Smith};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("presented group is infinite")]
    InfiniteGroup,
    #[error("map does not carry source relation {relation} into the target relations")]
    NotWellDefined { relation: usize },
    #[error("denominator is not contained in the numerator subgroup")]
    NotASubgroup,
    #[error("matrix has shape {found:?}, expected {expected:?}")]
    DimensionMismatch { expected: (usize, usize), found: (usize, usize) },
    #[error("invariant does not fit in 64 bits")]
    Overflow,
}
