//! The exterior square of a class-2 group on generator-pair symbols, its
//! commutator map, and the multiplier `M* / M₀*`.

mod expand;
mod system;

pub use expand::{expand_wedge, Expander, WedgeBasis, WedgeGen, WedgeWord};
pub(crate) use system::big;
pub use system::{
    bogomolov, Bogomolov, Certificate, CertificateEntry, CertificateTerm, CommutingSymbols, PairStrategy, WedgeOptions,
    WedgeSystem, Witness,
};

use crate::lattice::LatticeError;
use crate::pc::PcError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WedgeError {
    #[error(transparent)]
    Pc(#[from] PcError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("{pairs} element pairs exceed cap {cap}")]
    CapExceeded { pairs: String, cap: u64 },
    #[error("internal error: {0}")]
    Internal(String),
}
