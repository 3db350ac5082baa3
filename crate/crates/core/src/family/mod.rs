//! The construction family: certificates that build its members, and the
//! semiabelian decision procedure that recognizes them.

mod cert;
mod semiabelian;

pub use cert::{certificate_corpus, eval_cert, selector_subgroup, Atom, Cert, Evaluated, Factor, Word};
pub use semiabelian::{
    dl_rank_screen, in_family_g, is_semiabelian, validate_witness, Screen, SearchSummary, SemiabelianVerdict,
    WitnessStep, MEMBERSHIP_LABEL,
};
