//! Bogomolov multipliers `B₀(G) = M*(G) / M₀*(G)` of finite `p`-groups of
//! nilpotency class two.
//!
//! Groups are given by refined power-commutator presentations
//! ([`pc::PcPresentation`]). The exterior square `G ∧ G` is presented on
//! symbols of generator pairs ([`wedge`]), its commutator map is computed
//! exactly, and the subgroup generated by commuting pairs is compared with
//! the kernel using integer normal forms ([`lattice`]). An independent
//! brute-force construction over all element pairs lives in [`oracle`].
//!
//! ```
//! use bogomolov::{bogomolov, families, WedgeOptions};
//!
//! let g = families::heisenberg(3).unwrap();
//! let b = bogomolov(&g, &WedgeOptions::default()).unwrap();
//! assert!(b.invariants.is_trivial());
//! assert_eq!(b.m_star_invariants.as_slice(), &[3, 3]);
//! ```

pub mod families;
pub mod lattice;
pub mod oracle;
pub mod pc;
pub mod sequences;
pub mod wedge;

pub use lattice::FinAbInvariants;
pub use pc::{Element, PcBuilder, PcPresentation};
pub use wedge::{bogomolov, Bogomolov, WedgeOptions, WedgeSystem};
