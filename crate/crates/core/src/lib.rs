//! Finite ℓ-group computations: a permutation-group kernel, power-commutator
//! presentations, the cyclic / direct / wreath / quotient constructions,
//! Frattini rank and central series, semiabelian decisions, and a resumable
//! census pipeline over small-group datasets.

mod chain;
pub mod census;
pub mod claims;
pub mod error;
pub mod family;
pub mod fixtures;
pub mod group;
pub mod ops;
pub mod pc;
pub mod perm;
pub mod ramification;

pub use error::{GroupError, Result};
pub use group::{build_chain, PermGroup};
pub use perm::Perm;

/// Size limits shared by the constructions and enumerations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest group order that may be enumerated element by element.
    pub enum_cap: u128,
    /// Largest permutation degree a wreath product may produce.
    pub degree_cap: usize,
    /// Largest order accepted by the subgroup-lattice and semiabelian code.
    pub census_order_cap: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enum_cap: 1 << 20,
            degree_cap: 4096,
            census_order_cap: 1 << 8,
        }
    }
}
