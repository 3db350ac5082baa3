//! Constructions and invariants on permutation groups.

mod construct;
pub mod lattice;
mod series;

pub use lattice::{
    all_subgroups, maximal_subgroups_intersection, normal_abelian_subgroups, normal_subgroups,
    subgroups_up_to_conjugacy, GroupTable,
};
pub use construct::{cyclic_group, direct_product, quotient, quotient_group, wreath_regular, Quotient};
pub use series::{
    center, commutator_subgroup, derived_length, derived_series, frattini_subgroup,
    lower_central_series, lower_exp_p_series, prime_of_order, rank, SeriesKind, SeriesResult,
};

pub(crate) use construct::is_prime;

use crate::error::{GroupError, Result};
use crate::group::PermGroup;
use crate::perm::Perm;

/// A subgroup of a parent permutation group.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: PermGroup,
    group: PermGroup,
}

impl Subgroup {
    /// Subgroup generated by `gens`, all of which must lie in `parent`.
    pub fn new(parent: &PermGroup, gens: Vec<Perm>) -> Result<Self> {
        for g in &gens {
            if !parent.contains(g)? {
                return Err(GroupError::InvalidPerm(format!("{g} is not in the parent group")));
            }
        }
        let group = PermGroup::new(parent.degree(), gens)?;
        Ok(Subgroup {
            parent: parent.clone(),
            group,
        })
    }

    pub(crate) fn from_parts(parent: &PermGroup, group: PermGroup) -> Self {
        debug_assert!(group.is_subgroup_of(parent));
        Subgroup {
            parent: parent.clone(),
            group,
        }
    }

    pub fn trivial(parent: &PermGroup) -> Self {
        Subgroup::from_parts(parent, PermGroup::trivial(parent.degree()))
    }

    pub fn full(parent: &PermGroup) -> Self {
        Subgroup::from_parts(parent, parent.clone())
    }

    pub fn parent(&self) -> &PermGroup {
        &self.parent
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn generators(&self) -> &[Perm] {
        self.group.generators()
    }

    pub fn order(&self) -> u128 {
        self.group.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.group.is_trivial()
    }

    pub fn is_normal(&self) -> bool {
        self.group.is_normalized_by(&self.parent)
    }

    pub fn contains(&self, p: &Perm) -> Result<bool> {
        self.group.contains(p)
    }

    /// Equal as subsets of the parent.
    pub fn same_as(&self, other: &Subgroup) -> bool {
        self.group.same_group(&other.group)
    }
}
