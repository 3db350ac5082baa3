//! Commutator subgroups, Frattini subgroup, rank and the three descending
//! series (derived, lower central, lower exponent-ℓ central).

use serde::Serialize;

use crate::error::{GroupError, Result};
use crate::group::PermGroup;
use crate::ops::Subgroup;
use crate::perm::Perm;
use crate::Limits;

/// The prime `ℓ` if `order` is a positive power of `ℓ`.
pub fn prime_of_order(order: u128) -> Option<u64> {
    if order < 2 {
        return None;
    }
    let p = (2u128..)
        .take_while(|d| d * d <= order)
        .find(|d| order % d == 0)
        .unwrap_or(order);
    let mut n = order;
    while n % p == 0 {
        n /= p;
    }
    (n == 1).then_some(p as u64)
}

fn require_p_group(g: &PermGroup, prime: u64) -> Result<()> {
    let mut n = g.order();
    while n > 1 && n % prime as u128 == 0 {
        n /= prime as u128;
    }
    if n == 1 && super::is_prime(prime) {
        Ok(())
    } else {
        Err(GroupError::NotPGroup {
            order: g.order(),
            prime,
        })
    }
}

fn log_p(mut n: u128, prime: u64) -> u32 {
    let mut k = 0;
    while n > 1 {
        debug_assert_eq!(n % prime as u128, 0);
        n /= prime as u128;
        k += 1;
    }
    k
}

/// `[A, B]` for subgroups normal in `g`: the normal closure of the
/// commutators of their generators.
pub fn commutator_subgroup(g: &PermGroup, a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
    for s in [a, b] {
        if !s.group().is_subgroup_of(g) || !s.group().is_normalized_by(g) {
            return Err(GroupError::NotNormal);
        }
    }
    let seeds: Vec<Perm> = a
        .generators()
        .iter()
        .flat_map(|x| b.generators().iter().map(move |y| x.commutator(y)))
        .collect();
    Ok(Subgroup::from_parts(g, PermGroup::normal_closure_of(g, &seeds)?))
}

/// `G^ℓ [G,G]`: normal closure of generator ℓ-th powers and generator
/// commutators. Modulo `[G,G]` the group is abelian, so powers of
/// generators already generate the ℓ-th power subgroup there.
pub fn frattini_subgroup(g: &PermGroup, prime: u64) -> Result<Subgroup> {
    require_p_group(g, prime)?;
    let gens = g.generators();
    let mut seeds: Vec<Perm> = gens.iter().map(|x| x.pow(prime as i64)).collect();
    for (i, x) in gens.iter().enumerate() {
        for y in &gens[i + 1..] {
            seeds.push(x.commutator(y));
        }
    }
    Ok(Subgroup::from_parts(g, PermGroup::normal_closure_of(g, &seeds)?))
}

/// Minimal number of generators, `log_ℓ |G/Φ(G)|`.
pub fn rank(g: &PermGroup, prime: u64) -> Result<u32> {
    let phi = frattini_subgroup(g, prime)?;
    Ok(log_p(g.order() / phi.order(), prime))
}

/// Elements commuting with every generator.
pub fn center(g: &PermGroup, limits: &Limits) -> Result<Subgroup> {
    let mut z = PermGroup::trivial(g.degree());
    for x in g.elements(limits)? {
        if !z.has(&x) && g.generators().iter().all(|s| x.mul(s) == s.mul(&x)) {
            z = z.with_generators(&[x])?;
        }
    }
    Ok(Subgroup::from_parts(g, z))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    Derived,
    LowerCentral,
    LowerExpP,
}

#[derive(Clone, Debug)]
pub struct SeriesResult {
    pub kind: SeriesKind,
    /// `terms[0]` is the whole group; descending until stable.
    pub terms: Vec<Subgroup>,
    /// Rank of each consecutive factor `terms[i] / terms[i+1]` (ℓ-groups only).
    pub factor_ranks: Vec<u32>,
}

impl SeriesResult {
    /// Whether the series reaches the trivial group.
    pub fn reaches_trivial(&self) -> bool {
        self.terms.last().is_some_and(Subgroup::is_trivial)
    }

    /// Number of proper steps to the trivial group, if it is reached.
    pub fn length(&self) -> Option<usize> {
        self.reaches_trivial().then(|| self.terms.len() - 1)
    }

    pub fn orders(&self) -> Vec<u128> {
        self.terms.iter().map(Subgroup::order).collect()
    }
}

fn descend(
    g: &PermGroup,
    kind: SeriesKind,
    mut next: impl FnMut(&Subgroup) -> Result<Subgroup>,
) -> Result<Vec<Subgroup>> {
    let mut terms = vec![Subgroup::full(g)];
    loop {
        let last = terms.last().expect("nonempty");
        if last.is_trivial() {
            break;
        }
        let t = next(last)?;
        if t.order() == last.order() {
            // stable above the trivial group; not solvable/nilpotent
            let _ = kind;
            break;
        }
        terms.push(t);
    }
    Ok(terms)
}

/// Rank of `upper / lower` for consecutive terms whose factor is an abelian
/// ℓ-group central enough that `upper^ℓ lower` is its Frattini preimage.
fn abelian_factor_rank(upper: &Subgroup, lower: &Subgroup, prime: u64) -> Result<u32> {
    let powers: Vec<Perm> = upper
        .generators()
        .iter()
        .map(|x| x.pow(prime as i64))
        .collect();
    let phi = lower.group().with_generators(&powers)?;
    Ok(log_p(upper.order() / phi.order(), prime))
}

fn factor_ranks(terms: &[Subgroup], prime: Option<u64>) -> Result<Vec<u32>> {
    let Some(p) = prime else {
        return Ok(Vec::new());
    };
    terms
        .windows(2)
        .map(|w| abelian_factor_rank(&w[0], &w[1], p))
        .collect()
}

/// `G ⊇ [G,G] ⊇ [G',G'] ⊇ ...`
pub fn derived_series(g: &PermGroup) -> Result<SeriesResult> {
    let terms = descend(g, SeriesKind::Derived, |t| {
        let seeds: Vec<Perm> = t
            .generators()
            .iter()
            .enumerate()
            .flat_map(|(i, x)| t.generators()[i + 1..].iter().map(move |y| x.commutator(y)))
            .collect();
        // [N,N] is normal in G whenever N is
        Ok(Subgroup::from_parts(g, PermGroup::normal_closure_of(g, &seeds)?))
    })?;
    let ranks = factor_ranks(&terms, prime_of_order(g.order()))?;
    Ok(SeriesResult {
        kind: SeriesKind::Derived,
        terms,
        factor_ranks: ranks,
    })
}

/// Derived length; `None` when the group is not solvable.
pub fn derived_length(g: &PermGroup) -> Result<Option<usize>> {
    Ok(derived_series(g)?.length())
}

/// `γ_1 = G`, `γ_{i+1} = [G, γ_i]`.
pub fn lower_central_series(g: &PermGroup) -> Result<SeriesResult> {
    let whole = Subgroup::full(g);
    let terms = descend(g, SeriesKind::LowerCentral, |t| commutator_subgroup(g, &whole, t))?;
    let ranks = factor_ranks(&terms, prime_of_order(g.order()))?;
    Ok(SeriesResult {
        kind: SeriesKind::LowerCentral,
        terms,
        factor_ranks: ranks,
    })
}

/// `F_1 = G`, `F_t = F_{t-1}^ℓ [G, F_{t-1}]`.
pub fn lower_exp_p_series(g: &PermGroup, prime: u64) -> Result<SeriesResult> {
    require_p_group(g, prime)?;
    let terms = descend(g, SeriesKind::LowerExpP, |t| {
        // F/[G,F] is central, so ℓ-th powers of generators suffice there
        let mut seeds: Vec<Perm> = t
            .generators()
            .iter()
            .map(|x| x.pow(prime as i64))
            .collect();
        for s in g.generators() {
            for x in t.generators() {
                seeds.push(s.commutator(x));
            }
        }
        Ok(Subgroup::from_parts(g, PermGroup::normal_closure_of(g, &seeds)?))
    })?;
    let ranks = factor_ranks(&terms, Some(prime).filter(|_| g.order() > 1))?;
    Ok(SeriesResult {
        kind: SeriesKind::LowerExpP,
        terms,
        factor_ranks: ranks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::{cyclic_group, direct_product, quotient_group, wreath_regular};

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
        // right regular representation of Q8 from its pc presentation
        let text = "GROUP 8 1\nPRIME 2\nNGENS 3\nPOWER 1 = g3^1\nPOWER 2 = g3^1\nCOMM 2 1 = g3^1\nEND\n";
        crate::pc::parse_pc_file(text).unwrap()[0]
            .presentation
            .to_perm_group(&l())
            .unwrap()
    }

    /// Brute-force subgroup generated by all commutators of elements.
    fn brute_derived_order(g: &PermGroup) -> usize {
        let els = g.elements(&l()).unwrap();
        let mut set: Vec<Perm> = vec![g.identity()];
        let comms: Vec<Perm> = els
            .iter()
            .flat_map(|a| els.iter().map(move |b| a.commutator(b)))
            .collect();
        let mut i = 0;
        while i < set.len() {
            for c in &comms {
                let y = set[i].mul(c);
                if !set.contains(&y) {
                    set.push(y);
                }
            }
            i += 1;
        }
        set.len()
    }

    #[test]
    fn prime_detection() {
        assert_eq!(prime_of_order(64), Some(2));
        assert_eq!(prime_of_order(243), Some(3));
        assert_eq!(prime_of_order(5), Some(5));
        assert_eq!(prime_of_order(12), None);
        assert_eq!(prime_of_order(1), None);
    }

    #[test]
    fn commutators_of_small_groups() {
        let c8 = c(2, 3);
        let full = Subgroup::full(&c8);
        assert!(commutator_subgroup(&c8, &full, &full).unwrap().is_trivial());
        let d = d4();
        let fd = Subgroup::full(&d);
        assert_eq!(commutator_subgroup(&d, &fd, &fd).unwrap().order(), 2);
        assert_eq!(brute_derived_order(&d), 2);
        let q = q8();
        let fq = Subgroup::full(&q);
        assert_eq!(commutator_subgroup(&q, &fq, &fq).unwrap().order(), 2);
        assert_eq!(brute_derived_order(&q), 2);
    }

    #[test]
    fn commutator_rejects_non_normal() {
        let d = d4();
        let s = Subgroup::new(&d, vec![d.generators()[0].clone()]).unwrap();
        let full = Subgroup::full(&d);
        assert_eq!(commutator_subgroup(&d, &full, &s).unwrap_err(), GroupError::NotNormal);
    }

    #[test]
    fn derived_series_examples() {
        let s = derived_series(&c(2, 3)).unwrap();
        assert_eq!(s.orders(), vec![8, 1]);
        assert_eq!(s.length(), Some(1));
        let s = derived_series(&d4()).unwrap();
        assert_eq!(s.orders(), vec![8, 2, 1]);
        assert_eq!(s.length(), Some(2));
    }

    #[test]
    fn exp_p_series_of_c4() {
        let s = lower_exp_p_series(&c(2, 2), 2).unwrap();
        assert_eq!(s.orders(), vec![4, 2, 1]);
        assert_eq!(s.factor_ranks, vec![1, 1]);
        assert!(lower_exp_p_series(&c(3, 1), 2).is_err());
    }

    #[test]
    fn lower_central_of_d4() {
        let s = lower_central_series(&d4()).unwrap();
        assert_eq!(s.orders(), vec![8, 2, 1]);
        assert_eq!(s.factor_ranks, vec![2, 1]);
    }

    #[test]
    fn frattini_examples() {
        assert_eq!(frattini_subgroup(&c(2, 2), 2).unwrap().order(), 2);
        let v4 = direct_product(&c(2, 1), &c(2, 1)).unwrap();
        assert!(frattini_subgroup(&v4, 2).unwrap().is_trivial());
        assert_eq!(frattini_subgroup(&d4(), 2).unwrap().order(), 2);
        assert!(frattini_subgroup(&c(3, 1), 2).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&c(2, 3), 2).unwrap(), 1);
        assert_eq!(rank(&d4(), 2).unwrap(), 2);
        let v = direct_product(&direct_product(&c(2, 1), &c(2, 1)).unwrap(), &c(2, 2)).unwrap();
        assert_eq!(rank(&v, 2).unwrap(), 3);
        assert_eq!(rank(&direct_product(&c(2, 1), &c(2, 2)).unwrap(), 2).unwrap(), 2);
        assert_eq!(rank(&PermGroup::trivial(3), 2).unwrap(), 0);
    }

    #[test]
    fn wreath_rank_and_order() {
        let w = wreath_regular(&d4(), &c(2, 1), &l()).unwrap();
        assert_eq!(w.order(), 128);
        assert_eq!(rank(&w, 2).unwrap(), 3);
    }

    #[test]
    fn elementary_abelian_top_of_exp_p_series() {
        let g = d4();
        let s = lower_exp_p_series(&g, 2).unwrap();
        let top = quotient_group(&g, &s.terms[1], &l()).unwrap();
        assert!(top.is_abelian());
        assert!(top.generators().iter().all(|x| x.pow(2).is_identity()));
        assert_eq!(rank(&top, 2).unwrap(), rank(&g, 2).unwrap());
    }
}
