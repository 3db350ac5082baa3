//! Subgroup enumeration for small ℓ-groups.
//!
//! The group is tabulated once (elements sorted by image list, so the
//! identity is element 0) and subgroups are bitsets over element indices.
//! Enumeration is the cyclic extension method: every subgroup of order
//! `ℓ^{k+1}` is `⟨K, x⟩` for a subgroup `K` of order `ℓ^k` normalized by
//! `x ∉ K` with `x^ℓ ∈ K`, so each layer is produced from the previous one.

use std::collections::HashMap;
use std::fmt;

use crate::error::{GroupError, Result};
use crate::group::PermGroup;
use crate::ops::{prime_of_order, Subgroup};
use crate::perm::Perm;
use crate::Limits;

/// Set of element indices of a tabulated group.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElemSet {
    bits: Vec<u64>,
}

impl ElemSet {
    pub fn empty(n: usize) -> Self {
        ElemSet {
            bits: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = ElemSet::empty(n);
        for i in 0..n {
            s.insert(i as u32);
        }
        s
    }

    #[inline]
    pub fn contains(&self, i: u32) -> bool {
        self.bits[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: u32) -> bool {
        let w = &mut self.bits[(i / 64) as usize];
        let mask = 1u64 << (i % 64);
        let fresh = *w & mask == 0;
        *w |= mask;
        fresh
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection_len(&self, other: &ElemSet) -> usize {
        self.bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn union_with(&mut self, other: &ElemSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &ElemSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a &= b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let t = word.trailing_zeros();
                word &= word - 1;
                Some(w as u32 * 64 + t)
            })
        })
    }

    /// For sets of equal size: whether `self` has the lexicographically
    /// smaller sorted element list, i.e. owns the least element of the
    /// symmetric difference.
    pub fn lex_less(&self, other: &ElemSet) -> bool {
        debug_assert_eq!(self.len(), other.len());
        for (a, b) in self.bits.iter().zip(&other.bits) {
            let diff = a ^ b;
            if diff != 0 {
                return a & (diff & diff.wrapping_neg()) != 0;
            }
        }
        false
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A subgroup of a tabulated group with a generating set of element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TabSubgroup {
    pub set: ElemSet,
    pub gens: Vec<u32>,
}

impl TabSubgroup {
    pub fn order(&self) -> usize {
        self.set.len()
    }
}

/// Multiplication table of a small permutation group.
pub struct GroupTable {
    group: PermGroup,
    n: usize,
    prime: u64,
    elements: Vec<Perm>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    index: HashMap<Vec<u32>, u32>,
    base: Vec<u32>,
}

impl GroupTable {
    /// Tabulates an ℓ-group of order at most `limits.census_order_cap`.
    pub fn new(group: &PermGroup, limits: &Limits) -> Result<Self> {
        let order = group.order();
        if order > limits.census_order_cap {
            return Err(GroupError::CapExceeded {
                what: "group order",
                value: order,
                cap: limits.census_order_cap,
            });
        }
        let prime = match prime_of_order(order) {
            Some(p) => p,
            None if order == 1 => 2,
            None => return Err(GroupError::NotPGroup { order, prime: 0 }),
        };
        let mut elements = group.elements(limits)?;
        elements.sort();
        let n = elements.len();
        // elements are determined by their base images
        let base: Vec<u32> = group.base().iter().map(|&b| b as u32 - 1).collect();
        let sig = |p: &Perm| -> Vec<u32> { base.iter().map(|&b| p.apply0(b)).collect() };
        let index: HashMap<Vec<u32>, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (sig(p), i as u32))
            .collect();
        debug_assert_eq!(index.len(), n);
        let mut mul = vec![0u32; n * n];
        let mut buf = vec![0u32; base.len()];
        for (a, pa) in elements.iter().enumerate() {
            for (b, pb) in elements.iter().enumerate() {
                for (slot, &bp) in buf.iter_mut().zip(&base) {
                    *slot = pb.apply0(pa.apply0(bp));
                }
                mul[a * n + b] = index[&buf];
            }
        }
        let inv = (0..n)
            .map(|a| {
                (0..n as u32)
                    .find(|&b| mul[a * n + b as usize] == 0)
                    .expect("group element has an inverse")
            })
            .collect();
        Ok(GroupTable {
            group: group.clone(),
            n,
            prime,
            elements,
            mul,
            inv,
            index,
            base,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn element(&self, i: u32) -> &Perm {
        &self.elements[i as usize]
    }

    pub fn index_of(&self, p: &Perm) -> Option<u32> {
        let sig: Vec<u32> = self.base.iter().map(|&b| p.apply0(b)).collect();
        self.index
            .get(&sig)
            .copied()
            .filter(|&i| self.elements[i as usize] == *p)
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.n + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    /// `g^-1 x g`.
    #[inline]
    pub fn conj(&self, x: u32, g: u32) -> u32 {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn pow(&self, x: u32, e: u64) -> u32 {
        (0..e).fold(0, |acc, _| self.mul(acc, x))
    }

    pub fn full_set(&self) -> ElemSet {
        ElemSet::full(self.n)
    }

    pub fn trivial(&self) -> TabSubgroup {
        let mut set = ElemSet::empty(self.n);
        set.insert(0);
        TabSubgroup { set, gens: Vec::new() }
    }

    /// The whole group, generated by the images of its permutation generators.
    pub fn whole(&self) -> TabSubgroup {
        let gens: Vec<u32> = self
            .group
            .generators()
            .iter()
            .filter_map(|g| self.index_of(g))
            .filter(|&i| i != 0)
            .collect();
        TabSubgroup {
            set: self.full_set(),
            gens,
        }
    }

    pub fn closure(&self, gens: &[u32]) -> ElemSet {
        let mut set = ElemSet::empty(self.n);
        set.insert(0);
        let mut list = vec![0u32];
        let mut i = 0;
        while i < list.len() {
            for &g in gens {
                let y = self.mul(list[i], g);
                if set.insert(y) {
                    list.push(y);
                }
            }
            i += 1;
        }
        set
    }

    pub fn subgroup(&self, gens: &[u32]) -> TabSubgroup {
        TabSubgroup {
            set: self.closure(gens),
            gens: gens.to_vec(),
        }
    }

    pub fn is_abelian(&self, s: &TabSubgroup) -> bool {
        s.gens.iter().enumerate().all(|(i, &a)| {
            s.gens[i + 1..]
                .iter()
                .all(|&b| self.mul(a, b) == self.mul(b, a))
        })
    }

    /// Whether `x` normalizes `s`.
    pub fn normalizes(&self, x: u32, s: &TabSubgroup) -> bool {
        s.gens.iter().all(|&g| s.set.contains(self.conj(g, x)))
    }

    /// Whether `s` is normalized by every generator of `by`.
    pub fn is_normal_in(&self, s: &TabSubgroup, by: &TabSubgroup) -> bool {
        by.gens.iter().all(|&x| self.normalizes(x, s))
    }

    pub fn conjugate_set(&self, s: &ElemSet, g: u32) -> ElemSet {
        let mut out = ElemSet::empty(self.n);
        for x in s.iter() {
            out.insert(self.conj(x, g));
        }
        out
    }

    pub fn conjugate(&self, s: &TabSubgroup, g: u32) -> TabSubgroup {
        TabSubgroup {
            set: self.conjugate_set(&s.set, g),
            gens: s.gens.iter().map(|&x| self.conj(x, g)).collect(),
        }
    }

    /// Lexicographically least conjugate of `s` under the elements of
    /// `conjugators`, with the conjugating element used.
    pub fn canonical_conjugate(&self, s: &ElemSet, conjugators: &ElemSet) -> (ElemSet, u32) {
        let mut best = s.clone();
        let mut by = 0;
        for g in conjugators.iter() {
            let c = self.conjugate_set(s, g);
            if c.lex_less(&best) {
                best = c;
                by = g;
            }
        }
        (best, by)
    }

    /// `⟨K, x⟩ = ⋃_{i<ℓ} K x^i` for `x` normalizing `K` with `x^ℓ ∈ K`.
    fn extend(&self, k: &TabSubgroup, x: u32) -> TabSubgroup {
        let mut set = k.set.clone();
        let mut xi = x;
        for _ in 1..self.prime {
            for y in k.set.iter() {
                set.insert(self.mul(y, xi));
            }
            xi = self.mul(xi, x);
        }
        let mut gens = k.gens.clone();
        gens.push(x);
        TabSubgroup { set, gens }
    }

    /// Subgroups of `ambient`, layer by layer in increasing order.
    ///
    /// With `fuse`, one representative per `ambient`-conjugacy class is kept
    /// (the lexicographically least member of the class), and layers are
    /// extended from representatives only: any subgroup has a maximal
    /// subgroup conjugate to a representative, so its class is still reached.
    pub fn subgroups_within(&self, ambient: &TabSubgroup, fuse: bool) -> Vec<TabSubgroup> {
        let members: Vec<u32> = ambient.set.iter().collect();
        let mut all = vec![self.trivial()];
        let mut layer = vec![self.trivial()];
        while !layer.is_empty() && layer[0].order() < ambient.order() {
            let mut next: Vec<TabSubgroup> = Vec::new();
            let mut seen: HashMap<ElemSet, usize> = HashMap::new();
            for k in &layer {
                let mut covered = k.set.clone();
                for &x in &members {
                    if covered.contains(x)
                        || !self.normalizes(x, k)
                        || !k.set.contains(self.pow(x, self.prime))
                    {
                        continue;
                    }
                    let h = self.extend(k, x);
                    covered.union_with(&h.set);
                    let h = if fuse {
                        let (_, by) = self.canonical_conjugate(&h.set, &ambient.set);
                        self.conjugate(&h, by)
                    } else {
                        h
                    };
                    if !seen.contains_key(&h.set) {
                        seen.insert(h.set.clone(), next.len());
                        next.push(h);
                    }
                }
            }
            all.extend(next.iter().cloned());
            layer = next;
        }
        all
    }

    pub fn all_subgroups(&self) -> Vec<TabSubgroup> {
        self.subgroups_within(&self.whole(), false)
    }

    pub fn subgroup_classes(&self) -> Vec<TabSubgroup> {
        self.subgroups_within(&self.whole(), true)
    }

    pub fn to_subgroup(&self, s: &TabSubgroup) -> Result<Subgroup> {
        let gens = s.gens.iter().map(|&i| self.element(i).clone()).collect();
        let group = PermGroup::new(self.group.degree(), gens)?;
        debug_assert_eq!(group.order(), s.order() as u128);
        Ok(Subgroup::from_parts(&self.group, group))
    }

    /// Table subgroup for a permutation subgroup of the tabulated group.
    pub fn from_subgroup(&self, s: &Subgroup) -> Option<TabSubgroup> {
        let gens: Option<Vec<u32>> = s.generators().iter().map(|g| self.index_of(g)).collect();
        gens.map(|g| self.subgroup(&g))
    }
}

fn tabulate(g: &PermGroup, limits: &Limits) -> Result<GroupTable> {
    GroupTable::new(g, limits)
}

/// One representative per conjugacy class of subgroups, in increasing order,
/// including the trivial and full subgroups.
pub fn subgroups_up_to_conjugacy(g: &PermGroup, limits: &Limits) -> Result<Vec<Subgroup>> {
    let t = tabulate(g, limits)?;
    t.subgroup_classes().iter().map(|s| t.to_subgroup(s)).collect()
}

/// Every subgroup, in increasing order.
pub fn all_subgroups(g: &PermGroup, limits: &Limits) -> Result<Vec<Subgroup>> {
    let t = tabulate(g, limits)?;
    t.all_subgroups().iter().map(|s| t.to_subgroup(s)).collect()
}

/// Every normal subgroup, in increasing order.
pub fn normal_subgroups(g: &PermGroup, limits: &Limits) -> Result<Vec<Subgroup>> {
    let t = tabulate(g, limits)?;
    let whole = t.whole();
    t.subgroup_classes()
        .iter()
        .filter(|s| t.is_normal_in(s, &whole))
        .map(|s| t.to_subgroup(s))
        .collect()
}

/// Every abelian normal subgroup, in increasing order.
pub fn normal_abelian_subgroups(g: &PermGroup, limits: &Limits) -> Result<Vec<Subgroup>> {
    let t = tabulate(g, limits)?;
    let whole = t.whole();
    t.subgroup_classes()
        .iter()
        .filter(|s| t.is_normal_in(s, &whole) && t.is_abelian(s))
        .map(|s| t.to_subgroup(s))
        .collect()
}

/// Intersection of all maximal subgroups, computed from the lattice.
pub fn maximal_subgroups_intersection(g: &PermGroup, limits: &Limits) -> Result<Subgroup> {
    let t = tabulate(g, limits)?;
    if t.order() == 1 {
        return Ok(Subgroup::trivial(g));
    }
    // maximal subgroups of an ℓ-group have index ℓ and are normal
    let target = t.order() / t.prime() as usize;
    let mut meet = t.full_set();
    for s in t.all_subgroups().iter().filter(|s| s.order() == target) {
        meet.intersect_with(&s.set);
    }
    let gens: Vec<u32> = meet.iter().filter(|&i| i != 0).collect();
    let sub = t.subgroup(&gens);
    debug_assert_eq!(sub.set, meet);
    t.to_subgroup(&sub)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::{cyclic_group, direct_product, frattini_subgroup, wreath_regular};
    use crate::pc::parse_pc_file;

    fn l() -> Limits {
        Limits::default()
    }

    fn c(p: u64, k: u32) -> PermGroup {
        cyclic_group(p, k, &l()).unwrap()
    }

    fn d4() -> PermGroup {
        wreath_regular(&c(2, 1), &c(2, 1), &l()).unwrap()
    }

    fn q8() -> PermGroup {
        let text = "GROUP 8 1\nPRIME 2\nNGENS 3\nPOWER 1 = g3^1\nPOWER 2 = g3^1\nCOMM 2 1 = g3^1\nEND\n";
        parse_pc_file(text).unwrap()[0]
            .presentation
            .to_perm_group(&l())
            .unwrap()
    }

    /// Independent oracle: grow the set of subgroups by adjoining single
    /// elements until nothing new appears.
    fn brute_subgroups(t: &GroupTable) -> Vec<ElemSet> {
        let mut found: Vec<ElemSet> = vec![t.closure(&[])];
        let mut gens: Vec<Vec<u32>> = vec![vec![]];
        let mut i = 0;
        while i < found.len() {
            for x in 0..t.order() as u32 {
                if found[i].contains(x) {
                    continue;
                }
                let mut g = gens[i].clone();
                g.push(x);
                let s = t.closure(&g);
                if !found.contains(&s) {
                    found.push(s);
                    gens.push(g);
                }
            }
            i += 1;
        }
        found
    }

    fn brute_class_count(t: &GroupTable, subs: &[ElemSet]) -> usize {
        let mut reps: Vec<ElemSet> = Vec::new();
        for s in subs {
            let (canon, _) = t.canonical_conjugate(s, &t.full_set());
            if !reps.contains(&canon) {
                reps.push(canon);
            }
        }
        reps.len()
    }

    #[test]
    fn lex_order_on_equal_sizes() {
        let mut a = ElemSet::empty(10);
        let mut b = ElemSet::empty(10);
        for x in [0, 2, 5] {
            a.insert(x);
        }
        for x in [0, 3, 4] {
            b.insert(x);
        }
        assert!(a.lex_less(&b));
        assert!(!b.lex_less(&a));
        assert!(!a.lex_less(&a));
    }

    #[test]
    fn class_counts() {
        assert_eq!(subgroups_up_to_conjugacy(&c(2, 2), &l()).unwrap().len(), 3);
        let v4 = direct_product(&c(2, 1), &c(2, 1)).unwrap();
        assert_eq!(subgroups_up_to_conjugacy(&v4, &l()).unwrap().len(), 5);
        assert_eq!(subgroups_up_to_conjugacy(&d4(), &l()).unwrap().len(), 8);
    }

    #[test]
    fn d4_classes_match_brute_force() {
        let t = GroupTable::new(&d4(), &l()).unwrap();
        let brute = brute_subgroups(&t);
        assert_eq!(brute.len(), 10);
        assert_eq!(brute_class_count(&t, &brute), 8);
        let orders: Vec<usize> = t.subgroup_classes().iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 4, 4, 4, 8]);
    }

    #[test]
    fn representatives_are_lex_least() {
        let t = GroupTable::new(&d4(), &l()).unwrap();
        for s in t.subgroup_classes() {
            let (canon, _) = t.canonical_conjugate(&s.set, &t.full_set());
            assert_eq!(canon, s.set);
            assert_eq!(t.closure(&s.gens), s.set);
        }
    }

    #[test]
    fn normal_abelian_counts() {
        assert_eq!(normal_abelian_subgroups(&q8(), &l()).unwrap().len(), 5);
        assert_eq!(normal_subgroups(&q8(), &l()).unwrap().len(), 6);
        let v4 = direct_product(&c(2, 1), &c(2, 1)).unwrap();
        assert_eq!(normal_abelian_subgroups(&v4, &l()).unwrap().len(), 5);
        // D4: 1, Z, two Klein groups, C4, D4 are normal; all but D4 abelian
        assert_eq!(normal_subgroups(&d4(), &l()).unwrap().len(), 6);
        assert_eq!(normal_abelian_subgroups(&d4(), &l()).unwrap().len(), 5);
    }

    #[test]
    fn maximal_intersection_matches_frattini() {
        for g in [c(2, 2), d4(), q8(), direct_product(&c(2, 1), &c(2, 1)).unwrap(), c(3, 2)] {
            let p = prime_of_order(g.order()).unwrap();
            let a = frattini_subgroup(&g, p).unwrap();
            let b = maximal_subgroups_intersection(&g, &l()).unwrap();
            assert!(a.same_as(&b));
        }
    }

    #[test]
    fn cap_and_prime_checks() {
        let tight = Limits {
            census_order_cap: 4,
            ..l()
        };
        assert!(matches!(
            subgroups_up_to_conjugacy(&d4(), &tight),
            Err(GroupError::CapExceeded { .. })
        ));
        let s3 = PermGroup::new(
            3,
            vec![
                Perm::from_cycles(3, &[&[1, 2]]).unwrap(),
                Perm::from_cycles(3, &[&[1, 2, 3]]).unwrap(),
            ],
        )
        .unwrap();
        assert!(matches!(
            subgroups_up_to_conjugacy(&s3, &l()),
            Err(GroupError::NotPGroup { .. })
        ));
    }

    #[test]
    fn trivial_group_lattice() {
        let t = PermGroup::trivial(2);
        assert_eq!(subgroups_up_to_conjugacy(&t, &l()).unwrap().len(), 1);
    }
}
