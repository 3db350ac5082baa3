//! Ramification counts read off group invariants.
//!
//! Nothing here touches number fields. For a group built by a certificate,
//! the minimal number of tamely ramified primes over Q equals its rank: the
//! rank is a lower bound for any realization, and members of the
//! construction family attain it. Plans' bound is the sum of the ranks of the
//! lower central factors with one end factor left out; which end is meant is
//! ambiguous, so both sums are reported.

use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use crate::error::{GroupError, Result};
use crate::family::{self, Cert};
use crate::group::PermGroup;
use crate::ops;
use crate::pc::GroupId;
use crate::Limits;

pub const RANK_LOWER_BOUND_NOTE: &str =
    "every tame realization over Q ramifies at >= rank(G) primes (inertia groups generate G; no unramified extensions of Q)";

/// Sums of lower central factor ranks with one end factor dropped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PlansBound {
    pub factor_rank_sum: u32,
    pub excluding_first: u32,
    pub excluding_last: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Descriptor {
    Cert(String),
    Group(GroupId),
}

impl std::fmt::Display for Descriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Descriptor::Cert(c) => write!(f, "{c}"),
            Descriptor::Group(id) => write!(f, "{id}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Claim {
    /// Minimal number of ramified primes, with the reason it is attained.
    Exact { count: u32, witness: String },
    Unknown,
}

impl Serialize for Claim {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Claim::Exact { count, .. } => s.serialize_u32(*count),
            Claim::Unknown => s.serialize_str("unknown (not certified in G(ℓ))"),
        }
    }
}

impl std::fmt::Display for Claim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Claim::Exact { count, witness } => write!(f, "{count} (attained: {witness})"),
            Claim::Unknown => write!(f, "unknown (not certified in G(ℓ))"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RamReport {
    pub descriptor: Descriptor,
    pub order: u128,
    pub rank: u32,
    pub rank_lower_bound_note: &'static str,
    pub plans_ex_first: u32,
    pub plans_ex_last: u32,
    pub minimal_count_claim: Claim,
}

impl RamReport {
    pub fn gap_first(&self) -> i64 {
        self.plans_ex_first as i64 - self.rank as i64
    }

    pub fn gap_last(&self) -> i64 {
        self.plans_ex_last as i64 - self.rank as i64
    }
}

/// Plans' bound for a nontrivial ℓ-group.
pub fn plans_bound(g: &PermGroup, prime: u64) -> Result<PlansBound> {
    if g.is_trivial() {
        return Err(GroupError::TrivialGroup);
    }
    let lcs = ops::lower_central_series(g)?;
    if ops::prime_of_order(g.order()) != Some(prime) {
        return Err(GroupError::NotPGroup {
            order: g.order(),
            prime,
        });
    }
    let ranks = &lcs.factor_ranks;
    let sum: u32 = ranks.iter().sum();
    Ok(PlansBound {
        factor_rank_sum: sum,
        excluding_first: sum - ranks.first().copied().unwrap_or(0),
        excluding_last: sum - ranks.last().copied().unwrap_or(0),
    })
}

/// Report for a certificate: the claim is its rank, attained by the
/// certificate itself.
pub fn min_ramified_primes(c: &Cert, limits: &Limits) -> Result<RamReport> {
    let e = family::eval_cert(c, limits)?;
    let pb = plans_bound_or_zero(&e.group, e.prime)?;
    Ok(RamReport {
        descriptor: Descriptor::Cert(c.to_string()),
        order: e.group.order(),
        rank: e.rank,
        rank_lower_bound_note: RANK_LOWER_BOUND_NOTE,
        plans_ex_first: pb.excluding_first,
        plans_ex_last: pb.excluding_last,
        minimal_count_claim: Claim::Exact {
            count: e.rank,
            witness: format!("certificate {c}"),
        },
    })
}

/// Report for a dataset group: the claim is made only when the group is
/// semiabelian, hence in the construction family.
pub fn group_report(id: GroupId, g: &PermGroup, prime: u64, limits: &Limits) -> Result<RamReport> {
    let rank = ops::rank(g, prime)?;
    let pb = plans_bound_or_zero(g, prime)?;
    let claim = if family::in_family_g(g, limits)? {
        Claim::Exact {
            count: rank,
            witness: family::MEMBERSHIP_LABEL.to_string(),
        }
    } else {
        Claim::Unknown
    };
    Ok(RamReport {
        descriptor: Descriptor::Group(id),
        order: g.order(),
        rank,
        rank_lower_bound_note: RANK_LOWER_BOUND_NOTE,
        plans_ex_first: pb.excluding_first,
        plans_ex_last: pb.excluding_last,
        minimal_count_claim: claim,
    })
}

fn plans_bound_or_zero(g: &PermGroup, prime: u64) -> Result<PlansBound> {
    if g.is_trivial() {
        return Ok(PlansBound {
            factor_rank_sum: 0,
            excluding_first: 0,
            excluding_last: 0,
        });
    }
    plans_bound(g, prime)
}

/// Plain-text table comparing rank with both Plans sums, one row per
/// certificate. Gaps are `plans - rank` and may be negative.
pub fn compare_bounds(certs: &[Cert], limits: &Limits) -> Result<(Vec<RamReport>, String)> {
    let reports = certs
        .iter()
        .map(|c| min_ramified_primes(c, limits))
        .collect::<Result<Vec<_>>>()?;
    Ok((reports.clone(), bounds_table(&reports)))
}

pub fn bounds_table(reports: &[RamReport]) -> String {
    let width = reports
        .iter()
        .map(|r| r.descriptor.to_string().chars().count())
        .max()
        .unwrap_or(0)
        .max("group".len());
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<width$}  {:>6}  {:>4}  {:>8}  {:>7}  {:>9}  {:>8}",
        "group", "order", "rank", "ex_first", "ex_last", "gap_first", "gap_last"
    );
    for r in reports {
        let _ = writeln!(
            out,
            "{:<width$}  {:>6}  {:>4}  {:>8}  {:>7}  {:>9}  {:>8}",
            r.descriptor.to_string(),
            r.order,
            r.rank,
            r.plans_ex_first,
            r.plans_ex_last,
            r.gap_first(),
            r.gap_last()
        );
    }
    if reports.len() > 1 {
        let above = |f: fn(&RamReport) -> i64| reports.iter().filter(|r| f(r) > 0).count();
        let _ = writeln!(
            out,
            "{} rows; Plans sum exceeds rank in {} (ex_first) and {} (ex_last)",
            reports.len(),
            above(RamReport::gap_first),
            above(RamReport::gap_last)
        );
    }
    out
}
