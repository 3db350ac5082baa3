//! Cyclic groups, direct products, regular wreath products and quotients.

use std::collections::HashMap;

use crate::error::{GroupError, Result};
use crate::group::PermGroup;
use crate::ops::Subgroup;
use crate::perm::Perm;
use crate::Limits;

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// `C_{ℓ^k}` as a single `ℓ^k`-cycle.
pub fn cyclic_group(prime: u64, k: u32, limits: &Limits) -> Result<PermGroup> {
    if !is_prime(prime) {
        return Err(GroupError::InvalidCert(format!("{prime} is not prime")));
    }
    let n = (prime as u128)
        .checked_pow(k)
        .filter(|&n| n <= limits.enum_cap)
        .ok_or(GroupError::CapExceeded {
            what: "cyclic order",
            value: (prime as u128).checked_pow(k).unwrap_or(u128::MAX),
            cap: limits.enum_cap,
        })?;
    let n = n as usize;
    if n == 1 {
        return Ok(PermGroup::new(1, vec![Perm::identity(1)])?);
    }
    let images: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
    PermGroup::new(n, vec![Perm::from_raw(images)])
}

/// `G × H` on the disjoint union of the point sets; generators of `g` first.
pub fn direct_product(g: &PermGroup, h: &PermGroup) -> Result<PermGroup> {
    let degree = g.degree() + h.degree();
    let gens = g
        .generators()
        .iter()
        .map(|x| x.shifted(0, degree))
        .chain(h.generators().iter().map(|y| y.shifted(g.degree(), degree)))
        .collect();
    PermGroup::new(degree, gens)
}

/// Regular wreath product `H ≀ G = H^{|G|} ⋊ G`.
///
/// Points form `|G|` blocks of `deg(H)` points, one block per element of
/// `G`. Generators: those of `h` acting on the first block (the block of the
/// identity), then for each generator `s` of `g` the block permutation
/// `x ↦ x·s` of the right regular action. The top group is transitive on
/// blocks, so the base group is the normal closure of the first copy.
pub fn wreath_regular(h: &PermGroup, g: &PermGroup, limits: &Limits) -> Result<PermGroup> {
    let blocks = g.order();
    let degree = (h.degree() as u128)
        .checked_mul(blocks)
        .filter(|&d| d <= limits.degree_cap as u128)
        .ok_or(GroupError::CapExceeded {
            what: "wreath degree",
            value: (h.degree() as u128).saturating_mul(blocks),
            cap: limits.degree_cap as u128,
        })? as usize;
    let expected = h
        .order()
        .checked_pow(blocks as u32)
        .and_then(|b| b.checked_mul(blocks))
        .ok_or(GroupError::OrderOverflow("wreath order"))?;

    let mut top_elements = g.elements(limits)?;
    // identity first so its block holds the base copy
    top_elements.sort();
    let index: HashMap<&Perm, usize> = top_elements.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let hd = h.degree();

    let mut gens: Vec<Perm> = h
        .generators()
        .iter()
        .map(|y| y.shifted(0, degree))
        .collect();
    for s in g.generators() {
        let mut images = vec![0u32; degree];
        for (b, x) in top_elements.iter().enumerate() {
            let target = index[&x.mul(s)];
            for p in 0..hd {
                images[b * hd + p] = (target * hd + p) as u32;
            }
        }
        gens.push(Perm::from_raw(images));
    }
    let w = PermGroup::new(degree, gens)?;
    debug_assert_eq!(w.order(), expected);
    Ok(w)
}

/// `G/N` acting regularly on the right cosets of `N`, together with the
/// coset representatives that define the natural map.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: PermGroup,
    normal: PermGroup,
    reps: Vec<Perm>,
    lookup: HashMap<Perm, usize>,
}

impl Quotient {
    pub fn index(&self) -> usize {
        self.reps.len()
    }

    /// Image of an element of the parent under the natural map.
    pub fn image(&self, x: &Perm) -> Perm {
        let images = self
            .reps
            .iter()
            .map(|r| self.lookup[&self.normal.canonical_right_coset(&r.mul(x))] as u32)
            .collect();
        Perm::from_raw(images)
    }
}

/// Quotient by a normal subgroup; the generators of the result are the
/// images of `g`'s generators, in order.
pub fn quotient(g: &PermGroup, n: &Subgroup, limits: &Limits) -> Result<Quotient> {
    if n.group().degree() != g.degree() || !n.group().is_subgroup_of(g) {
        return Err(GroupError::NotNormal);
    }
    if !n.group().is_normalized_by(g) {
        return Err(GroupError::NotNormal);
    }
    let idx = g.order() / n.order();
    if idx > limits.enum_cap {
        return Err(GroupError::CapExceeded {
            what: "quotient index",
            value: idx,
            cap: limits.enum_cap,
        });
    }
    let normal = n.group().clone();
    let id = g.identity();
    let mut reps = vec![id.clone()];
    let mut lookup = HashMap::from([(normal.canonical_right_coset(&id), 0usize)]);
    let mut table: Vec<Vec<u32>> = vec![Vec::with_capacity(idx as usize); g.generators().len()];
    let mut i = 0;
    while i < reps.len() {
        for (s, gen) in g.generators().iter().enumerate() {
            let y = reps[i].mul(gen);
            let key = normal.canonical_right_coset(&y);
            let next = lookup.len();
            let target = *lookup.entry(key).or_insert_with(|| {
                reps.push(y);
                next
            });
            table[s].push(target as u32);
        }
        i += 1;
    }
    debug_assert_eq!(reps.len() as u128, idx);
    let degree = reps.len();
    let gens = if table.is_empty() {
        vec![Perm::identity(degree)]
    } else {
        table.into_iter().map(Perm::from_raw).collect()
    };
    let group = PermGroup::new(degree, gens)?;
    Ok(Quotient {
        group,
        normal,
        reps,
        lookup,
    })
}

/// `G/N` as a permutation group of degree `[G:N]`.
pub fn quotient_group(g: &PermGroup, n: &Subgroup, limits: &Limits) -> Result<PermGroup> {
    quotient(g, n, limits).map(|q| q.group)
}
