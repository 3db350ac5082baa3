//! Construction certificates.
//!
//! A certificate is a tree over four constructors whose evaluation builds an
//! ℓ-group together with a structural rank:
//!
//! ```text
//! C(ℓ,k)            cyclic group of order ℓ^k (k ≥ 1)         rank 1
//! D(a,b)            direct product a × b                      rank a + b
//! W(a,b)            regular wreath product a ≀ b              rank a + b
//! Q(a;w1,w2,...)    a / N, N the normal closure of the words  rank a
//! ```
//!
//! The words of `Q` are in the generators `g1, g2, ...` of the evaluated
//! child: a word is a `*`-separated product of factors, a factor is `g<i>`,
//! `[w,w]` (commutator `w^-1 w'^-1 w w'`) or `(w)`, optionally raised to an
//! integer power `^e` or `^-e`. `N` must lie in the Frattini subgroup of the
//! child, so the quotient keeps the rank. An empty word list means `N = 1`.
//!
//! Generators of evaluated groups: `C` has its cycle; `D(a,b)` has those of
//! `a` then those of `b`; `W(a,b)` has those of `a` (on the first block) then
//! those of `b` (on the blocks); `Q` has the images of the child's.

use std::fmt;

use crate::error::{GroupError, Result};
use crate::group::PermGroup;
use crate::ops::{self, Subgroup};
use crate::perm::Perm;
use crate::Limits;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Gen(usize),
    Comm(Word, Word),
    Group(Word),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub atom: Atom,
    pub exp: i64,
}

/// A product of factors; the empty word is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Factor>);

impl Word {
    pub fn gen(i: usize) -> Word {
        Word(vec![Factor {
            atom: Atom::Gen(i),
            exp: 1,
        }])
    }

    pub fn pow(self, exp: i64) -> Word {
        Word(vec![Factor {
            atom: Atom::Group(self),
            exp,
        }])
    }

    pub fn comm(a: Word, b: Word) -> Word {
        Word(vec![Factor {
            atom: Atom::Comm(a, b),
            exp: 1,
        }])
    }

    /// Evaluates the word in the given generators (1-based `g<i>`).
    pub fn eval(&self, gens: &[Perm], degree: usize) -> Result<Perm> {
        let mut acc = Perm::identity(degree);
        for f in &self.0 {
            let base = match &f.atom {
                Atom::Gen(i) => gens
                    .get(i.wrapping_sub(1))
                    .cloned()
                    .ok_or_else(|| GroupError::InvalidWord(format!("g{i} but only {} generators", gens.len())))?,
                Atom::Comm(a, b) => a.eval(gens, degree)?.commutator(&b.eval(gens, degree)?),
                Atom::Group(w) => w.eval(gens, degree)?,
            };
            acc = acc.mul(&base.pow(f.exp));
        }
        Ok(acc)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "()");
        }
        for (i, fac) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            match &fac.atom {
                Atom::Gen(k) => write!(f, "g{k}")?,
                Atom::Comm(a, b) => write!(f, "[{a},{b}]")?,
                Atom::Group(w) => write!(f, "({w})")?,
            }
            if fac.exp != 1 {
                write!(f, "^{}", fac.exp)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Cert {
    Cyclic { prime: u64, exp: u32 },
    DirectProduct(Box<Cert>, Box<Cert>),
    /// `inner ≀ outer`.
    Wreath { inner: Box<Cert>, outer: Box<Cert> },
    FrattiniQuotient { child: Box<Cert>, words: Vec<Word> },
}

impl Cert {
    pub fn cyclic(prime: u64, exp: u32) -> Cert {
        Cert::Cyclic { prime, exp }
    }

    pub fn direct(a: Cert, b: Cert) -> Cert {
        Cert::DirectProduct(Box::new(a), Box::new(b))
    }

    pub fn wreath(inner: Cert, outer: Cert) -> Cert {
        Cert::Wreath {
            inner: Box::new(inner),
            outer: Box::new(outer),
        }
    }

    pub fn quotient(child: Cert, words: Vec<Word>) -> Cert {
        Cert::FrattiniQuotient {
            child: Box::new(child),
            words,
        }
    }

    /// Rank read off the tree: cyclic groups have rank 1, direct and wreath
    /// products add ranks, Frattini quotients keep it.
    pub fn declared_rank(&self) -> u32 {
        match self {
            Cert::Cyclic { .. } => 1,
            Cert::DirectProduct(a, b) => a.declared_rank() + b.declared_rank(),
            Cert::Wreath { inner, outer } => inner.declared_rank() + outer.declared_rank(),
            Cert::FrattiniQuotient { child, .. } => child.declared_rank(),
        }
    }

    /// The common prime of all leaves.
    pub fn prime(&self) -> Result<u64> {
        match self {
            Cert::Cyclic { prime, .. } => Ok(*prime),
            Cert::DirectProduct(a, b)
            | Cert::Wreath {
                inner: a,
                outer: b,
            } => {
                let (p, q) = (a.prime()?, b.prime()?);
                if p == q {
                    Ok(p)
                } else {
                    Err(GroupError::InvalidCert(format!("mixes primes {p} and {q}")))
                }
            }
            Cert::FrattiniQuotient { child, .. } => child.prime(),
        }
    }

    /// Number of constructor nodes (leaves included).
    pub fn size(&self) -> usize {
        match self {
            Cert::Cyclic { .. } => 1,
            Cert::DirectProduct(a, b)
            | Cert::Wreath {
                inner: a,
                outer: b,
            } => 1 + a.size() + b.size(),
            Cert::FrattiniQuotient { child, .. } => 1 + child.size(),
        }
    }

    pub fn is_wreath(&self) -> bool {
        matches!(self, Cert::Wreath { .. })
    }

    /// Order of the evaluated group, computed from the tree alone. `None` on
    /// overflow or for quotient nodes (which need the evaluated child).
    pub fn predicted_order(&self) -> Option<u128> {
        match self {
            Cert::Cyclic { prime, exp } => (*prime as u128).checked_pow(*exp),
            Cert::DirectProduct(a, b) => a.predicted_order()?.checked_mul(b.predicted_order()?),
            Cert::Wreath { inner, outer } => {
                let h = inner.predicted_order()?;
                let g = outer.predicted_order()?;
                h.checked_pow(u32::try_from(g).ok()?)?.checked_mul(g)
            }
            Cert::FrattiniQuotient { .. } => None,
        }
    }

    /// Degree of the evaluated permutation group, from the tree alone.
    pub fn predicted_degree(&self) -> Option<u128> {
        match self {
            Cert::Cyclic { prime, exp } => (*prime as u128).checked_pow(*exp),
            Cert::DirectProduct(a, b) => a.predicted_degree()?.checked_add(b.predicted_degree()?),
            Cert::Wreath { inner, outer } => inner.predicted_degree()?.checked_mul(outer.predicted_order()?),
            Cert::FrattiniQuotient { .. } => None,
        }
    }
}

impl fmt::Display for Cert {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cert::Cyclic { prime, exp } => write!(f, "C({prime},{exp})"),
            Cert::DirectProduct(a, b) => write!(f, "D({a},{b})"),
            Cert::Wreath { inner, outer } => write!(f, "W({inner},{outer})"),
            Cert::FrattiniQuotient { child, words } => {
                write!(f, "Q({child};")?;
                for (i, w) in words.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{w}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl std::str::FromStr for Cert {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Cert> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser { chars, pos: 0 };
        let c = p.cert()?;
        if p.pos != p.chars.len() {
            return Err(p.error("trailing input"));
        }
        Ok(c)
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, msg: &str) -> GroupError {
        let rest: String = self.chars[self.pos.min(self.chars.len())..].iter().collect();
        GroupError::InvalidCert(format!("{msg} at position {} (near {rest:?})", self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected {c:?}")))
        }
    }

    fn int(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().map_err(|_| self.error("number too large"))
    }

    fn cert(&mut self) -> Result<Cert> {
        let head = self.peek().ok_or_else(|| self.error("expected a certificate"))?;
        self.pos += 1;
        self.eat('(')?;
        let c = match head {
            'C' => {
                let prime = self.int()?;
                self.eat(',')?;
                let exp = u32::try_from(self.int()?).map_err(|_| self.error("exponent too large"))?;
                Cert::cyclic(prime, exp)
            }
            'D' | 'W' => {
                let a = self.cert()?;
                self.eat(',')?;
                let b = self.cert()?;
                if head == 'D' {
                    Cert::direct(a, b)
                } else {
                    Cert::wreath(a, b)
                }
            }
            'Q' => {
                let child = self.cert()?;
                self.eat(';')?;
                let mut words = Vec::new();
                if self.peek() != Some(')') {
                    words.push(self.word()?);
                    while self.peek() == Some(',') {
                        self.pos += 1;
                        words.push(self.word()?);
                    }
                }
                Cert::quotient(child, words)
            }
            _ => {
                self.pos -= 2;
                return Err(self.error("expected C, D, W or Q"));
            }
        };
        self.eat(')')?;
        Ok(c)
    }

    fn word(&mut self) -> Result<Word> {
        let mut factors = vec![self.factor()?];
        while self.peek() == Some('*') {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        Ok(Word(factors))
    }

    fn factor(&mut self) -> Result<Factor> {
        let atom = match self.peek() {
            Some('g') => {
                self.pos += 1;
                let i = self.int()? as usize;
                if i == 0 {
                    return Err(self.error("generators are numbered from 1"));
                }
                Atom::Gen(i)
            }
            Some('[') => {
                self.pos += 1;
                let a = self.word()?;
                self.eat(',')?;
                let b = self.word()?;
                self.eat(']')?;
                Atom::Comm(a, b)
            }
            Some('(') => {
                self.pos += 1;
                if self.peek() == Some(')') {
                    self.pos += 1;
                    Atom::Group(Word::default())
                } else {
                    let w = self.word()?;
                    self.eat(')')?;
                    Atom::Group(w)
                }
            }
            _ => return Err(self.error("expected g<i>, [..] or (..)")),
        };
        let mut exp = 1i64;
        if self.peek() == Some('^') {
            self.pos += 1;
            let neg = self.peek() == Some('-');
            if neg {
                self.pos += 1;
            }
            let e = i64::try_from(self.int()?).map_err(|_| self.error("exponent too large"))?;
            exp = if neg { -e } else { e };
        }
        Ok(Factor { atom, exp })
    }
}

/// A certificate's evaluated group with its structural and computed ranks.
#[derive(Clone, Debug)]
pub struct Evaluated {
    pub group: PermGroup,
    pub prime: u64,
    pub rank: u32,
}

/// Builds the group of a certificate by structural recursion, checking at
/// every node that the structural rank equals the Frattini rank.
pub fn eval_cert(c: &Cert, limits: &Limits) -> Result<Evaluated> {
    let prime = c.prime()?;
    let group = eval_node(c, prime, limits)?;
    let rank = ops::rank(&group, prime)?;
    if rank != c.declared_rank() {
        return Err(GroupError::InvalidCert(format!(
            "{c}: declared rank {} but computed rank {rank}",
            c.declared_rank()
        )));
    }
    Ok(Evaluated { group, prime, rank })
}

fn eval_node(c: &Cert, prime: u64, limits: &Limits) -> Result<PermGroup> {
    match c {
        Cert::Cyclic { prime, exp } => {
            if *exp == 0 {
                return Err(GroupError::InvalidCert("C(ℓ,0) is trivial; exponents start at 1".into()));
            }
            ops::cyclic_group(*prime, *exp, limits)
        }
        Cert::DirectProduct(a, b) => ops::direct_product(&eval_node(a, prime, limits)?, &eval_node(b, prime, limits)?),
        Cert::Wreath { inner, outer } => {
            let h = eval_node(inner, prime, limits)?;
            let g = eval_node(outer, prime, limits)?;
            ops::wreath_regular(&h, &g, limits)
        }
        Cert::FrattiniQuotient { child, words } => {
            let g = eval_node(child, prime, limits)?;
            let n = selector_subgroup(&g, words)?;
            let phi = ops::frattini_subgroup(&g, prime)?;
            if !n.group().is_subgroup_of(phi.group()) {
                return Err(GroupError::InvalidCert(format!(
                    "{c}: selected normal subgroup is not contained in the Frattini subgroup"
                )));
            }
            ops::quotient_group(&g, &n, limits)
        }
    }
}

/// Normal closure in `g` of the words evaluated in `g`'s generators.
pub fn selector_subgroup(g: &PermGroup, words: &[Word]) -> Result<Subgroup> {
    let seeds = words
        .iter()
        .map(|w| w.eval(g.generators(), g.degree()))
        .collect::<Result<Vec<_>>>()?;
    let n = PermGroup::normal_closure_of(g, &seeds)?;
    Ok(Subgroup::from_parts(g, n))
}

/// Every certificate over the leaves `C(ℓ,1..=max_exp)` (for each listed
/// prime) with at most `max_constructors` internal `D`/`W` nodes, keeping
/// those whose predicted degree and order fit the bounds.
pub fn certificate_corpus(
    primes: &[u64],
    max_exp: u32,
    max_constructors: usize,
    max_degree: u128,
    max_order: u128,
) -> Vec<Cert> {
    let fits = |c: &Cert| {
        c.predicted_degree().is_some_and(|d| d <= max_degree)
            && c.predicted_order().is_some_and(|o| o <= max_order)
    };
    let mut out = Vec::new();
    for &p in primes {
        // by_size[k]: certificates with exactly k internal nodes
        let mut by_size: Vec<Vec<Cert>> = vec![(1..=max_exp).map(|e| Cert::cyclic(p, e)).collect()];
        for k in 1..=max_constructors {
            let mut level = Vec::new();
            for left in 0..k {
                let right = k - 1 - left;
                for a in &by_size[left] {
                    for b in &by_size[right] {
                        for c in [Cert::direct(a.clone(), b.clone()), Cert::wreath(a.clone(), b.clone())] {
                            if fits(&c) {
                                level.push(c);
                            }
                        }
                    }
                }
            }
            by_size.push(level);
        }
        out.extend(by_size.into_iter().flatten());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l() -> Limits {
        Limits::default()
    }

    #[test]
    fn parse_and_print_round_trip() {
        for text in [
            "W(C(2,1),C(2,1))",
            "D(C(2,2),W(C(3,1),C(3,1)))",
            "Q(W(C(2,1),C(2,1));[g1,g2])",
            "Q(C(2,3);g1^2,(g1*g1)^-2)",
            "Q(C(2,2);)",
        ] {
            let c: Cert = text.parse().unwrap();
            assert_eq!(c.to_string(), text);
        }
        let c: Cert = " W( C(2,1) , C(2,1) ) ".parse().unwrap();
        assert_eq!(c, Cert::wreath(Cert::cyclic(2, 1), Cert::cyclic(2, 1)));
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "X(2,1)", "C(2)", "W(C(2,1))", "C(2,1)x", "Q(C(2,1);g0)", "Q(C(2,1);h1)"] {
            assert!(bad.parse::<Cert>().is_err(), "{bad:?} parsed");
        }
    }

    #[test]
    fn cyclic_cert() {
        let e = eval_cert(&Cert::cyclic(2, 3), &l()).unwrap();
        assert_eq!((e.group.order(), e.rank), (8, 1));
    }

    #[test]
    fn wreath_cert_is_dihedral() {
        let c: Cert = "W(C(2,1),C(2,1))".parse().unwrap();
        let e = eval_cert(&c, &l()).unwrap();
        assert_eq!((e.group.order(), e.rank), (8, 2));
        assert!(!e.group.is_abelian());
        assert_eq!(c.predicted_order(), Some(8));
        assert_eq!(c.predicted_degree(), Some(4));
    }

    #[test]
    fn frattini_quotient_keeps_rank() {
        let c: Cert = "Q(C(2,3);g1^4)".parse().unwrap();
        let e = eval_cert(&c, &l()).unwrap();
        assert_eq!((e.group.order(), e.rank), (4, 1));
        let c: Cert = "Q(W(C(2,1),C(2,1));[g1,g2])".parse().unwrap();
        let e = eval_cert(&c, &l()).unwrap();
        assert_eq!((e.group.order(), e.rank), (4, 2));
        let c: Cert = "Q(C(2,2);)".parse().unwrap();
        assert_eq!(eval_cert(&c, &l()).unwrap().group.order(), 4);
    }

    #[test]
    fn quotient_outside_frattini_is_rejected() {
        let c: Cert = "Q(C(2,2);g1)".parse().unwrap();
        assert!(matches!(eval_cert(&c, &l()), Err(GroupError::InvalidCert(_))));
        let c: Cert = "Q(D(C(2,1),C(2,1));g1)".parse().unwrap();
        assert!(matches!(eval_cert(&c, &l()), Err(GroupError::InvalidCert(_))));
    }

    #[test]
    fn invalid_certificates() {
        assert!(eval_cert(&"D(C(2,1),C(3,1))".parse().unwrap(), &l()).is_err());
        assert!(eval_cert(&"C(2,0)".parse().unwrap(), &l()).is_err());
        assert!(eval_cert(&"C(6,1)".parse().unwrap(), &l()).is_err());
        assert!(eval_cert(&"Q(C(2,2);g3)".parse().unwrap(), &l()).is_err());
    }

    #[test]
    fn declared_rank_arithmetic() {
        let c: Cert = "D(C(3,1),W(C(3,1),C(3,1)))".parse().unwrap();
        assert_eq!(c.declared_rank(), 3);
        assert_eq!(eval_cert(&c, &l()).unwrap().rank, 3);
    }

    #[test]
    fn corpus_respects_bounds() {
        let corpus = certificate_corpus(&[2, 3], 2, 2, 4096, 1 << 60);
        assert!(corpus.iter().all(|c| c.predicted_degree().unwrap() <= 4096));
        assert!(corpus.iter().filter(|c| c.is_wreath()).count() >= 30);
        let mut uniq = corpus.clone();
        uniq.dedup();
        assert_eq!(uniq.len(), corpus.len());
    }
}
