//! Deciding semiabelianity.
//!
//! A finite group is semiabelian when it is trivial, or it is a product `AH`
//! of an abelian normal subgroup `A` and a proper semiabelian subgroup `H`.
//! The search runs inside one multiplication table of the input group: every
//! group met during the recursion is a subgroup of it, and conjugate
//! subgroups are isomorphic, so verdicts are memoized on the least member of
//! each conjugacy class in the input group.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::Result;
use crate::group::PermGroup;
use crate::ops::lattice::{ElemSet, GroupTable, TabSubgroup};
use crate::ops::{self, Subgroup};
use crate::Limits;

/// One step `G_i = A_i H_i` of a semiabelian chain; `H_i` is the next group.
#[derive(Clone, Debug)]
pub struct WitnessStep {
    pub group: Subgroup,
    pub abelian_normal: Subgroup,
    pub complement: Subgroup,
}

/// Size of the search that was run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchSummary {
    /// Distinct subgroup classes whose verdict was computed.
    pub classes_decided: usize,
    /// Abelian normal subgroups of the input group that were tried.
    pub top_candidates_a: usize,
    /// Conjugacy classes of proper subgroups of the input group.
    pub top_candidates_h: usize,
    /// `(A, H)` pairs whose product was checked, over the whole recursion.
    pub pairs_tested: usize,
}

#[derive(Clone, Debug)]
pub struct SemiabelianVerdict {
    pub flag: bool,
    /// On `true`, the chain from the input group down to an abelian group
    /// (whose step has `A = G_i`, `H = 1`). Empty for the trivial group.
    pub witness: Vec<WitnessStep>,
    pub search: SearchSummary,
}

type Decomposition = Option<(TabSubgroup, TabSubgroup)>;

struct Search<'a> {
    t: &'a GroupTable,
    everything: ElemSet,
    memo: HashMap<ElemSet, Decomposition>,
    summary: SearchSummary,
}

impl Search<'_> {
    fn decide(&mut self, s: &TabSubgroup, top: bool) -> bool {
        if s.order() == 1 || self.t.is_abelian(s) {
            return true;
        }
        let (canon, by) = self.t.canonical_conjugate(&s.set, &self.everything);
        if let Some(d) = self.memo.get(&canon) {
            return d.is_some();
        }
        let c = self.t.conjugate(s, by);
        let classes = self.t.subgroups_within(&c, true);
        let n = c.order();
        let mut candidates: Vec<&TabSubgroup> = classes
            .iter()
            .filter(|a| a.order() > 1 && a.order() < n && self.t.is_normal_in(a, &c) && self.t.is_abelian(a))
            .collect();
        // descending by order; layers come out ascending, so a stable sort keeps
        // the order deterministic
        candidates.sort_by_key(|a| std::cmp::Reverse(a.order()));
        // Conjugation by x ∈ G_i fixes A and maps AH to AH^x, so one H per
        // G_i-class is enough.
        let hs: Vec<&TabSubgroup> = classes.iter().filter(|h| h.order() < n).collect();
        if top {
            self.summary.top_candidates_a = candidates.len();
            self.summary.top_candidates_h = hs.len();
        }
        let mut failed: Vec<&ElemSet> = Vec::new();
        let mut found = None;
        'outer: for a in candidates {
            // AH = G with A ⊆ A' forces A'H = G, so A fails whenever A' did
            if failed.iter().any(|f| a.set.is_subset(f)) {
                continue;
            }
            for h in &hs {
                if h.order() * a.order() < n {
                    continue;
                }
                self.summary.pairs_tested += 1;
                if a.order() * h.order() != n * a.set.intersection_len(&h.set) {
                    continue;
                }
                if self.decide(h, false) {
                    found = Some((a.clone(), (*h).clone()));
                    break 'outer;
                }
            }
            failed.push(&a.set);
        }
        let ok = found.is_some();
        self.memo.insert(canon, found);
        self.summary.classes_decided = self.memo.len();
        ok
    }

    /// Table-level chain for `s`, read back out of the memo.
    fn chain(&self, s: &TabSubgroup) -> Vec<(TabSubgroup, TabSubgroup, TabSubgroup)> {
        let mut out = Vec::new();
        let mut s = s.clone();
        while s.order() > 1 {
            if self.t.is_abelian(&s) {
                let one = self.t.trivial();
                out.push((s.clone(), s, one));
                break;
            }
            let (canon, by) = self.t.canonical_conjugate(&s.set, &self.everything);
            let (a, h) = self.memo[&canon].clone().expect("chain only follows successful decisions");
            let back = self.t.inv(by);
            let (a, h) = (self.t.conjugate(&a, back), self.t.conjugate(&h, back));
            out.push((s, a, h.clone()));
            s = h;
        }
        out
    }
}

/// Decides whether `g` is semiabelian, returning a witness chain when it is.
pub fn is_semiabelian(g: &PermGroup, limits: &Limits) -> Result<SemiabelianVerdict> {
    let t = GroupTable::new(g, limits)?;
    let whole = t.whole();
    let mut search = Search {
        t: &t,
        everything: t.full_set(),
        memo: HashMap::new(),
        summary: SearchSummary::default(),
    };
    let flag = search.decide(&whole, true);
    let mut witness = Vec::new();
    if flag {
        for (s, a, h) in search.chain(&whole) {
            witness.push(WitnessStep {
                group: t.to_subgroup(&s)?,
                abelian_normal: t.to_subgroup(&a)?,
                complement: t.to_subgroup(&h)?,
            });
        }
    }
    Ok(SemiabelianVerdict {
        flag,
        witness,
        search: search.summary,
    })
}

/// Re-checks a positive verdict's chain with permutation-group operations
/// only: each `A` abelian and normal in `G_i`, each `H` a proper subgroup,
/// `⟨A, H⟩ = G_i` with `|A||H| / |A ∩ H| = |G_i|`, the chain starting at `g`
/// and ending at the trivial group.
pub fn validate_witness(g: &PermGroup, steps: &[WitnessStep], limits: &Limits) -> std::result::Result<(), String> {
    let mut current = g.clone();
    for (i, st) in steps.iter().enumerate() {
        let gi = st.group.group();
        let a = st.abelian_normal.group();
        let h = st.complement.group();
        if !gi.same_group(&current) {
            return Err(format!("step {i}: group is not the previous complement"));
        }
        if !a.is_subgroup_of(gi) || !h.is_subgroup_of(gi) {
            return Err(format!("step {i}: A or H is not a subgroup"));
        }
        if !a.is_abelian() {
            return Err(format!("step {i}: A is not abelian"));
        }
        if !a.is_normalized_by(gi) {
            return Err(format!("step {i}: A is not normal"));
        }
        if h.order() >= gi.order() {
            return Err(format!("step {i}: H is not proper"));
        }
        let meet = a
            .elements(limits)
            .map_err(|e| e.to_string())?
            .iter()
            .filter(|x| h.has(x))
            .count() as u128;
        if a.order() * h.order() != gi.order() * meet {
            return Err(format!("step {i}: |A||H|/|A∩H| ≠ |G_i|"));
        }
        let joined = a.with_generators(h.generators()).map_err(|e| e.to_string())?;
        if !joined.same_group(gi) {
            return Err(format!("step {i}: ⟨A, H⟩ ≠ G_i"));
        }
        current = h.clone();
    }
    if !current.is_trivial() {
        return Err("chain does not end at the trivial group".into());
    }
    Ok(())
}

/// Label attached to membership results: the answer is the semiabelian
/// verdict, read as family membership through the equality of the two
/// families.
pub const MEMBERSHIP_LABEL: &str = "G(ℓ) membership via equality with the semiabelian family";

/// Membership in the construction family, decided as semiabelianity.
pub fn in_family_g(g: &PermGroup, limits: &Limits) -> Result<bool> {
    Ok(is_semiabelian(g, limits)?.flag)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Screen {
    DefinitelyNotMember,
    Inconclusive,
}

/// Every member has derived length at most its rank, so `dl > rank` rules
/// membership out.
pub fn dl_rank_screen(g: &PermGroup, prime: u64) -> Result<Screen> {
    let dl = ops::derived_length(g)?.unwrap_or(usize::MAX);
    let rank = ops::rank(g, prime)? as usize;
    Ok(if dl > rank {
        Screen::DefinitelyNotMember
    } else {
        Screen::Inconclusive
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture;
    use crate::perm::Perm;

    fn l() -> Limits {
        Limits::default()
    }

    fn fx(label: &str) -> PermGroup {
        fixture(label).unwrap().presentation.to_perm_group(&l()).unwrap()
    }

    #[test]
    fn trivial_and_abelian_groups() {
        let v = is_semiabelian(&PermGroup::trivial(3), &l()).unwrap();
        assert!(v.flag && v.witness.is_empty());
        let g = fx("C4 x C2");
        let v = is_semiabelian(&g, &l()).unwrap();
        assert!(v.flag);
        assert_eq!(v.witness.len(), 1);
        assert_eq!(v.witness[0].abelian_normal.order(), 8);
        assert!(v.witness[0].complement.is_trivial());
        validate_witness(&g, &v.witness, &l()).unwrap();
    }

    #[test]
    fn order_8_groups_are_semiabelian() {
        for label in ["dihedral D4", "quaternion Q8"] {
            let g = fx(label);
            let v = is_semiabelian(&g, &l()).unwrap();
            assert!(v.flag, "{label}");
            assert_eq!(v.witness.len(), 2);
            validate_witness(&g, &v.witness, &l()).unwrap();
        }
    }

    #[test]
    fn validation_rejects_bad_chains() {
        let g = fx("dihedral D4");
        let mut v = is_semiabelian(&g, &l()).unwrap();
        // drop the last step: no longer ends at 1
        v.witness.pop();
        assert!(validate_witness(&g, &v.witness, &l()).is_err());
        // a non-abelian A
        let v = is_semiabelian(&g, &l()).unwrap();
        let mut bad = v.witness.clone();
        bad[0].abelian_normal = Subgroup::full(&g);
        assert!(validate_witness(&g, &bad, &l()).is_err());
        // wrong starting group
        assert!(validate_witness(&fx("quaternion Q8"), &v.witness, &l()).is_err());
    }

    #[test]
    fn screen_examples() {
        assert_eq!(dl_rank_screen(&fx("dihedral D4"), 2).unwrap(), Screen::Inconclusive);
        assert_eq!(dl_rank_screen(&fx("C8"), 2).unwrap(), Screen::Inconclusive);
        assert_eq!(dl_rank_screen(&PermGroup::trivial(1), 2).unwrap(), Screen::Inconclusive);
    }

    #[test]
    fn membership_delegates() {
        assert!(in_family_g(&PermGroup::trivial(2), &l()).unwrap());
        let c = Perm::from_cycles(4, &[&[1, 2, 3, 4]]).unwrap();
        assert!(in_family_g(&PermGroup::new(4, vec![c]).unwrap(), &l()).unwrap());
    }

    #[test]
    fn order_cap_applies() {
        let g = ops::cyclic_group(2, 9, &l()).unwrap();
        assert!(is_semiabelian(&g, &l()).is_err());
    }
}
