//! Refined power-commutator presentations of finite p-groups of class at
//! most two, with exact arithmetic by closed-form collection.

mod arithmetic;
mod presentation;
mod structure;

pub use arithmetic::ConsistencyReport;
pub use presentation::{Element, GroupWord, PcBuilder, PcPresentation};
pub(crate) use presentation::is_prime;
pub use structure::{CentralQuotient, CommutingPairs, DirectProduct, ElementIter, DEFAULT_CAP};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PcError {
    #[error("inconsistent presentation: {0}")]
    InconsistentPresentation(String),
    #[error("nilpotency class exceeds two: {0}")]
    ClassTooHigh(String),
    #[error("presentation is not refined: {0}")]
    NotRefined(String),
    #[error("size {size} exceeds cap {cap}")]
    CapExceeded { size: String, cap: u64 },
    #[error("element {0} is not in the span of the central block")]
    NotInCentralBlock(String),
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("generator index or vector length {0} out of range")]
    IndexOutOfRange(usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("relative order {order} of {label} is not a nontrivial power of the prime")]
    BadRelativeOrder { label: String, order: i64 },
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("duplicate generator {0}")]
    DuplicateGenerator(String),
    #[error("malformed presentation: {0}")]
    Malformed(String),
    #[error("integer overflow in normal form")]
    Overflow,
}
