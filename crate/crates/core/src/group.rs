use std::sync::Arc;

use crate::chain::StabChain;
use crate::error::{GroupError, Result};
use crate::perm::Perm;
use crate::Limits;

/// A permutation group given by generators, with its stabilizer chain.
///
/// Immutable once built; clones share the chain.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
    chain: Arc<StabChain>,
    order: u128,
}

/// Builds the group generated by a nonempty, degree-consistent list.
pub fn build_chain(gens: &[Perm]) -> Result<PermGroup> {
    let first = gens
        .first()
        .ok_or_else(|| GroupError::InvalidPerm("empty generator list".into()))?;
    PermGroup::new(first.degree(), gens.to_vec())
}

impl PermGroup {
    pub fn new(degree: usize, gens: Vec<Perm>) -> Result<Self> {
        if degree == 0 {
            return Err(GroupError::InvalidPerm("degree must be positive".into()));
        }
        if let Some(bad) = gens.iter().find(|g| g.degree() != degree) {
            return Err(GroupError::DegreeMismatch {
                left: degree,
                right: bad.degree(),
            });
        }
        let chain = StabChain::from_generators(degree, &gens);
        Self::from_chain(degree, gens, chain)
    }

    fn from_chain(degree: usize, gens: Vec<Perm>, chain: StabChain) -> Result<Self> {
        let order = chain.order().ok_or(GroupError::OrderOverflow("group order"))?;
        Ok(PermGroup {
            degree,
            gens,
            chain: Arc::new(chain),
            order,
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            gens: Vec::new(),
            chain: Arc::new(StabChain::trivial(degree)),
            order: 1,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn strong_generators(&self) -> &[Perm] {
        self.chain.strong_generators()
    }

    /// Base points, 1-based.
    pub fn base(&self) -> Vec<usize> {
        self.chain.base().into_iter().map(|b| b as usize + 1).collect()
    }

    pub fn transversal_sizes(&self) -> Vec<usize> {
        self.chain.orbit_sizes()
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    pub fn contains(&self, p: &Perm) -> Result<bool> {
        if p.degree() != self.degree {
            return Err(GroupError::DegreeMismatch {
                left: self.degree,
                right: p.degree(),
            });
        }
        Ok(self.chain.contains(p))
    }

    /// Membership for a perm already known to have the right degree.
    pub(crate) fn has(&self, p: &Perm) -> bool {
        self.chain.contains(p)
    }

    /// Every element exactly once, if the order is within the enumeration cap.
    pub fn elements(&self, limits: &Limits) -> Result<Vec<Perm>> {
        if self.order > limits.enum_cap {
            return Err(GroupError::CapExceeded {
                what: "group order",
                value: self.order,
                cap: limits.enum_cap,
            });
        }
        Ok(self.chain.elements())
    }

    pub fn is_abelian(&self) -> bool {
        self.gens.iter().enumerate().all(|(i, a)| {
            self.gens[i + 1..]
                .iter()
                .all(|b| a.mul(b) == b.mul(a))
        })
    }

    /// Whether every generator of `self` lies in `other`.
    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.gens.iter().all(|g| other.has(g))
    }

    /// Same degree, same order, and mutual containment.
    pub fn same_group(&self, other: &PermGroup) -> bool {
        self.order == other.order && self.is_subgroup_of(other)
    }

    /// Whether `self` is normalized by every generator of `by`.
    pub fn is_normalized_by(&self, by: &PermGroup) -> bool {
        by.gens
            .iter()
            .all(|g| self.gens.iter().all(|x| self.has(&x.conjugate(g))))
    }

    /// The group generated by `self` and the extra elements.
    pub fn with_generators(&self, extra: &[Perm]) -> Result<PermGroup> {
        let mut chain = (*self.chain).clone();
        let mut gens = self.gens.clone();
        for g in extra {
            if g.degree() != self.degree {
                return Err(GroupError::DegreeMismatch {
                    left: self.degree,
                    right: g.degree(),
                });
            }
            if chain.add_generator(g) {
                gens.push(g.clone());
            }
        }
        Self::from_chain(self.degree, gens, chain)
    }

    /// Smallest subgroup normalized by `ambient` that contains `seeds`.
    pub fn normal_closure_of(ambient: &PermGroup, seeds: &[Perm]) -> Result<PermGroup> {
        let mut chain = StabChain::trivial(ambient.degree);
        let mut gens: Vec<Perm> = Vec::new();
        for s in seeds {
            if s.degree() != ambient.degree {
                return Err(GroupError::DegreeMismatch {
                    left: ambient.degree,
                    right: s.degree(),
                });
            }
            if chain.add_generator(s) {
                gens.push(s.clone());
            }
        }
        let mut i = 0;
        while i < gens.len() {
            for g in &ambient.gens {
                let c = gens[i].conjugate(g);
                if chain.add_generator(&c) {
                    gens.push(c);
                }
            }
            i += 1;
        }
        Self::from_chain(ambient.degree, gens, chain)
    }

    pub(crate) fn canonical_right_coset(&self, g: &Perm) -> Perm {
        self.chain.canonical_right_coset(g)
    }
}
