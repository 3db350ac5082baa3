//! Power-commutator presentations of ℓ-groups.
//!
//! A presentation on generators `g1..gn` with prime `ℓ` lists, for each `i`,
//! the normal form of `g_i^ℓ`, and for each `j > i`, the normal form of the
//! commutator `[g_j, g_i] = g_j^-1 g_i^-1 g_j g_i`. Every right-hand side
//! uses only generators of index above `max(i, j)`, which makes collection
//! from the left terminate.
//!
//! File format (line oriented, `#` starts a comment):
//!
//! ```text
//! GROUP <order> <index>
//! PRIME <ℓ>
//! NGENS <n>
//! POWER <i> = <word>        # omitted: g_i^ℓ = 1
//! COMM <j> <i> = <word>     # j > i; omitted: [g_j, g_i] = 1
//! END
//! ```
//!
//! A word is `1` or `g<a>^<e>*g<b>^<e'>*...` with strictly increasing
//! indices and exponents in `1..ℓ`. A comment of the form
//! `# provenance: <text>` directly before `GROUP` is kept as the record's
//! provenance.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{GroupError, Result};
use crate::group::PermGroup;
use crate::perm::Perm;
use crate::Limits;

/// Identifier of a group within an ingested dataset: its order and its
/// 1-based position in the file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupId {
    pub order: u128,
    pub index: u32,
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.order, self.index)
    }
}

/// Sparse word: `(generator index, exponent)` pairs, 0-based indices, sorted.
pub type PcWord = Vec<(usize, u32)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcPresentation {
    prime: u32,
    ngens: usize,
    power: Vec<PcWord>,
    // comm[j][i] for i < j
    comm: Vec<Vec<PcWord>>,
}

/// Exponent vector in `[0, ℓ)^n`; the normal form of an element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PcElement(pub Vec<u32>);

/// One parsed group of a dataset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcRecord {
    pub id: GroupId,
    pub provenance: Option<String>,
    pub presentation: PcPresentation,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl PcPresentation {
    /// Builds a presentation from 1-based relation lists, validating the
    /// index-order and exponent rules.
    pub fn new(
        prime: u32,
        ngens: usize,
        powers: &[(usize, PcWord)],
        comms: &[(usize, usize, PcWord)],
    ) -> Result<Self> {
        let err = |msg: String| GroupError::Parse { line: 0, msg };
        if !is_prime(prime as u64) {
            return Err(err(format!("{prime} is not prime")));
        }
        let mut p = PcPresentation::free_abelian(prime, ngens);
        for (i, w) in powers {
            let i = check_gen(*i, ngens).map_err(err)?;
            p.power[i] = check_word(w, i, prime, ngens).map_err(err)?;
        }
        for (j, i, w) in comms {
            let j = check_gen(*j, ngens).map_err(err)?;
            let i = check_gen(*i, ngens).map_err(err)?;
            if j <= i {
                return Err(err(format!("COMM {} {}: need j > i", j + 1, i + 1)));
            }
            p.comm[j][i] = check_word(w, j, prime, ngens).map_err(err)?;
        }
        Ok(p)
    }

    /// Elementary abelian group of rank `ngens`.
    fn free_abelian(prime: u32, ngens: usize) -> Self {
        PcPresentation {
            prime,
            ngens,
            power: vec![Vec::new(); ngens],
            comm: (0..ngens).map(|j| vec![Vec::new(); j]).collect(),
        }
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    /// `ℓ^n`, or `None` on overflow.
    pub fn order(&self) -> Option<u128> {
        (self.prime as u128).checked_pow(self.ngens as u32)
    }

    pub fn identity(&self) -> PcElement {
        PcElement(vec![0; self.ngens])
    }

    /// The `k`-th generator, 1-based.
    pub fn generator(&self, k: usize) -> PcElement {
        let mut e = self.identity();
        e.0[k - 1] = 1;
        e
    }

    pub fn is_valid(&self, e: &PcElement) -> bool {
        e.0.len() == self.ngens && e.0.iter().all(|&x| x < self.prime)
    }

    fn mul_word(&self, r: &mut [u32], word: &PcWord) {
        for &(k, e) in word {
            for _ in 0..e {
                self.mul_gen(r, k);
            }
        }
    }

    /// Collects `r * g_k` in place.
    ///
    /// With `T = g_{k+1}^{r_{k+1}} ... g_n^{r_n}` we have
    /// `r g_k = prefix g_k^{r_k + 1} T^{g_k}` and
    /// `g_j^{g_k} = g_j [g_j, g_k]`, all of which involve only generators
    /// above `k`, so the recursion terminates.
    fn mul_gen(&self, r: &mut [u32], k: usize) {
        let mut tail: Vec<(usize, u32)> = Vec::new();
        for (j, slot) in r.iter_mut().enumerate().skip(k + 1) {
            if *slot != 0 {
                tail.push((j, std::mem::take(slot)));
            }
        }
        r[k] += 1;
        if r[k] == self.prime {
            r[k] = 0;
            self.mul_word(r, &self.power[k]);
        }
        for (j, count) in tail {
            for _ in 0..count {
                self.mul_gen(r, j);
                self.mul_word(r, &self.comm[j][k]);
            }
        }
    }

    /// Normal form of `a * b`.
    pub fn multiply(&self, a: &PcElement, b: &PcElement) -> PcElement {
        debug_assert!(self.is_valid(a) && self.is_valid(b));
        let mut r = a.0.clone();
        for (k, &e) in b.0.iter().enumerate() {
            for _ in 0..e {
                self.mul_gen(&mut r, k);
            }
        }
        PcElement(r)
    }

    pub fn power(&self, a: &PcElement, mut exp: u128) -> PcElement {
        let mut acc = self.identity();
        let mut sq = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.multiply(&acc, &sq);
            }
            sq = self.multiply(&sq, &sq);
            exp >>= 1;
        }
        acc
    }

    pub fn inverse(&self, a: &PcElement) -> PcElement {
        // every element order divides ℓ^n
        let order = self.order().expect("order fits in u128");
        self.power(a, order - 1)
    }

    pub fn commutator(&self, a: &PcElement, b: &PcElement) -> PcElement {
        let ai = self.inverse(a);
        let bi = self.inverse(b);
        let t = self.multiply(&ai, &bi);
        let t = self.multiply(&t, a);
        self.multiply(&t, b)
    }

    /// Position of an element in the lexicographic exponent order, 0-based
    /// (`g1` is the most significant digit).
    pub fn index_of(&self, e: &PcElement) -> usize {
        e.0.iter()
            .fold(0usize, |acc, &x| acc * self.prime as usize + x as usize)
    }

    pub fn element_at(&self, mut index: usize) -> PcElement {
        let p = self.prime as usize;
        let mut v = vec![0u32; self.ngens];
        for slot in v.iter_mut().rev() {
            *slot = (index % p) as u32;
            index /= p;
        }
        PcElement(v)
    }

    /// All elements in lexicographic exponent order.
    pub fn elements(&self, limits: &Limits) -> Result<Vec<PcElement>> {
        let n = self.checked_order(limits)?;
        Ok((0..n as usize).map(|i| self.element_at(i)).collect())
    }

    fn checked_order(&self, limits: &Limits) -> Result<u128> {
        match self.order() {
            Some(n) if n <= limits.enum_cap => Ok(n),
            other => Err(GroupError::CapExceeded {
                what: "presentation order",
                value: other.unwrap_or(u128::MAX),
                cap: limits.enum_cap,
            }),
        }
    }

    /// Right regular representation on the elements in lexicographic order:
    /// generator `g_k` sends the point of `x` to the point of `x g_k`.
    pub fn to_perm_group(&self, limits: &Limits) -> Result<PermGroup> {
        let n = self.checked_order(limits)? as usize;
        let elements: Vec<PcElement> = (0..n).map(|i| self.element_at(i)).collect();
        let gens = (1..=self.ngens)
            .map(|k| {
                let g = self.generator(k);
                let images: Vec<u32> = elements
                    .iter()
                    .map(|x| self.index_of(&self.multiply(x, &g)) as u32)
                    .collect();
                Perm::from_raw(images)
            })
            .collect();
        PermGroup::new(n, gens)
    }

    /// Canonical text of one group block.
    pub fn to_text(&self, id: GroupId, provenance: Option<&str>) -> String {
        let mut out = String::new();
        if let Some(p) = provenance {
            let _ = writeln!(out, "# provenance: {p}");
        }
        let _ = writeln!(out, "GROUP {} {}", id.order, id.index);
        let _ = writeln!(out, "PRIME {}", self.prime);
        let _ = writeln!(out, "NGENS {}", self.ngens);
        for (i, w) in self.power.iter().enumerate() {
            if !w.is_empty() {
                let _ = writeln!(out, "POWER {} = {}", i + 1, word_text(w));
            }
        }
        for (j, row) in self.comm.iter().enumerate() {
            for (i, w) in row.iter().enumerate() {
                if !w.is_empty() {
                    let _ = writeln!(out, "COMM {} {} = {}", j + 1, i + 1, word_text(w));
                }
            }
        }
        out.push_str("END\n");
        out
    }
}

fn word_text(w: &PcWord) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|(k, e)| format!("g{}^{}", k + 1, e))
        .collect::<Vec<_>>()
        .join("*")
}

fn check_gen(i: usize, ngens: usize) -> std::result::Result<usize, String> {
    if i == 0 || i > ngens {
        Err(format!("generator index {i} out of range 1..={ngens}"))
    } else {
        Ok(i - 1)
    }
}

/// Validates a 0-based word whose generators must all exceed `above`.
fn check_word(w: &PcWord, above: usize, prime: u32, ngens: usize) -> std::result::Result<PcWord, String> {
    let mut last: Option<usize> = None;
    let mut out = Vec::with_capacity(w.len());
    for &(k, e) in w {
        if k >= ngens {
            return Err(format!("generator g{} out of range 1..={ngens}", k + 1));
        }
        if k <= above {
            return Err(format!(
                "index-order violation: g{} must be above g{}",
                k + 1,
                above + 1
            ));
        }
        if last.is_some_and(|l| k <= l) {
            return Err("generator indices must be strictly increasing".into());
        }
        if e == 0 || e >= prime {
            return Err(format!("exponent {e} out of range 1..{prime}"));
        }
        last = Some(k);
        out.push((k, e));
    }
    Ok(out)
}

/// Parses a word into 0-based `(index, exponent)` pairs without range checks.
fn parse_word(text: &str) -> std::result::Result<PcWord, String> {
    let text = text.trim();
    if text == "1" {
        return Ok(Vec::new());
    }
    text.split('*')
        .map(|factor| {
            let factor = factor.trim();
            let rest = factor
                .strip_prefix('g')
                .ok_or_else(|| format!("bad factor {factor:?}"))?;
            let (idx, exp) = match rest.split_once('^') {
                Some((i, e)) => (i, e),
                None => (rest, "1"),
            };
            let idx: usize = idx.trim().parse().map_err(|_| format!("bad generator in {factor:?}"))?;
            let exp: u32 = exp.trim().parse().map_err(|_| format!("bad exponent in {factor:?}"))?;
            if idx == 0 {
                return Err(format!("bad generator in {factor:?}"));
            }
            Ok((idx - 1, exp))
        })
        .collect()
}

#[derive(Default)]
struct Block {
    start: usize,
    id: Option<GroupId>,
    provenance: Option<String>,
    prime: Option<u32>,
    ngens: Option<usize>,
    powers: BTreeMap<usize, (usize, PcWord)>,
    comms: BTreeMap<(usize, usize), (usize, PcWord)>,
}

impl Block {
    fn finish(self, end_line: usize) -> Result<PcRecord> {
        let perr = |line: usize, msg: String| GroupError::Parse { line, msg };
        let id = self.id.expect("block starts with GROUP");
        let prime = self
            .prime
            .ok_or_else(|| perr(end_line, "missing PRIME".into()))?;
        let ngens = self
            .ngens
            .ok_or_else(|| perr(end_line, "missing NGENS".into()))?;
        if !is_prime(prime as u64) {
            return Err(perr(self.start, format!("{prime} is not prime")));
        }
        let mut p = PcPresentation::free_abelian(prime, ngens);
        for (i, (line, w)) in self.powers {
            let i = check_gen(i, ngens).map_err(|m| perr(line, m))?;
            p.power[i] = check_word(&w, i, prime, ngens).map_err(|m| perr(line, m))?;
        }
        for ((j, i), (line, w)) in self.comms {
            let j = check_gen(j, ngens).map_err(|m| perr(line, m))?;
            let i = check_gen(i, ngens).map_err(|m| perr(line, m))?;
            if j <= i {
                return Err(perr(line, format!("COMM {} {}: need j > i", j + 1, i + 1)));
            }
            p.comm[j][i] = check_word(&w, j, prime, ngens).map_err(|m| perr(line, m))?;
        }
        if p.order() != Some(id.order) {
            return Err(perr(
                self.start,
                format!("GROUP order {} but {}^{} elements", id.order, prime, ngens),
            ));
        }
        Ok(PcRecord {
            id,
            provenance: self.provenance,
            presentation: p,
        })
    }
}

/// Parses a dataset in the power-commutator file format.
pub fn parse_pc_file(text: &str) -> Result<Vec<PcRecord>> {
    let mut out: Vec<PcRecord> = Vec::new();
    let mut seen: HashSet<GroupId> = HashSet::new();
    let mut block: Option<Block> = None;
    let mut pending_provenance: Option<String> = None;
    let perr = |line: usize, msg: String| GroupError::Parse { line, msg };

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(p) = comment.trim().strip_prefix("provenance:") {
                pending_provenance = Some(p.trim().to_string());
            }
            continue;
        }
        let content = match trimmed.find('#') {
            Some(pos) => trimmed[..pos].trim(),
            None => trimmed,
        };
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let keyword = words.next().unwrap_or_default();
        let args: Vec<&str> = words.collect();

        if keyword == "GROUP" {
            if block.is_some() {
                return Err(perr(line_no, "GROUP inside an unterminated block".into()));
            }
            let [order, index] = args[..] else {
                return Err(perr(line_no, "expected GROUP <order> <index>".into()));
            };
            let order: u128 = order
                .parse()
                .map_err(|_| perr(line_no, format!("bad order {order:?}")))?;
            let index: u32 = index
                .parse()
                .ok()
                .filter(|&i| i > 0)
                .ok_or_else(|| perr(line_no, format!("bad index {index:?}")))?;
            let id = GroupId { order, index };
            if !seen.insert(id) {
                return Err(perr(line_no, format!("duplicate GroupId {id}")));
            }
            block = Some(Block {
                start: line_no,
                id: Some(id),
                provenance: pending_provenance.take(),
                ..Block::default()
            });
            continue;
        }

        let b = block
            .as_mut()
            .ok_or_else(|| perr(line_no, format!("{keyword} outside a GROUP block")))?;
        match keyword {
            "PRIME" => {
                let [p] = args[..] else {
                    return Err(perr(line_no, "expected PRIME <p>".into()));
                };
                b.prime = Some(p.parse().map_err(|_| perr(line_no, format!("bad prime {p:?}")))?);
            }
            "NGENS" => {
                let [n] = args[..] else {
                    return Err(perr(line_no, "expected NGENS <n>".into()));
                };
                b.ngens = Some(n.parse().map_err(|_| perr(line_no, format!("bad NGENS {n:?}")))?);
            }
            "POWER" => {
                let (lhs, rhs) = content["POWER".len()..]
                    .split_once('=')
                    .ok_or_else(|| perr(line_no, "expected POWER <i> = <word>".into()))?;
                let i: usize = lhs
                    .trim()
                    .parse()
                    .map_err(|_| perr(line_no, format!("bad generator index {:?}", lhs.trim())))?;
                let w = parse_word(rhs).map_err(|m| perr(line_no, m))?;
                if b.powers.insert(i, (line_no, w)).is_some() {
                    return Err(perr(line_no, format!("duplicate POWER {i}")));
                }
            }
            "COMM" => {
                let (lhs, rhs) = content["COMM".len()..]
                    .split_once('=')
                    .ok_or_else(|| perr(line_no, "expected COMM <j> <i> = <word>".into()))?;
                let idx: Vec<usize> = lhs
                    .split_whitespace()
                    .map(|s| s.parse())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| perr(line_no, format!("bad indices {:?}", lhs.trim())))?;
                let [j, i] = idx[..] else {
                    return Err(perr(line_no, "expected COMM <j> <i> = <word>".into()));
                };
                let w = parse_word(rhs).map_err(|m| perr(line_no, m))?;
                if b.comms.insert((j, i), (line_no, w)).is_some() {
                    return Err(perr(line_no, format!("duplicate COMM {j} {i}")));
                }
            }
            "END" => {
                let b = block.take().expect("checked above");
                out.push(b.finish(line_no)?);
            }
            other => return Err(perr(line_no, format!("unknown keyword {other:?}"))),
        }
    }
    if let Some(b) = block {
        return Err(perr(b.start, "block not terminated by END".into()));
    }
    Ok(out)
}

/// Canonical text for a dataset; `parse_pc_file` of the output reproduces
/// the records exactly.
pub fn serialize_pc_file(records: &[PcRecord]) -> String {
    records
        .iter()
        .map(|r| r.presentation.to_text(r.id, r.provenance.as_deref()))
        .collect()
}

/// Invariants computed by brute force on exponent vectors, independent of
/// the permutation kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PcInvariants {
    pub order: u128,
    pub rank: u32,
    pub derived_length: u32,
}

impl PcPresentation {
    fn closure(&self, seeds: impl IntoIterator<Item = PcElement>) -> HashSet<PcElement> {
        let seeds: Vec<PcElement> = seeds.into_iter().filter(|s| *s != self.identity()).collect();
        let mut set: HashSet<PcElement> = HashSet::from([self.identity()]);
        let mut queue: VecDeque<PcElement> = VecDeque::from([self.identity()]);
        while let Some(x) = queue.pop_front() {
            for s in &seeds {
                let y = self.multiply(&x, s);
                if set.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        set
    }

    /// Order, Frattini rank and derived length by exhaustive enumeration.
    pub fn brute_force_invariants(&self, limits: &Limits) -> Result<PcInvariants> {
        let all = self.elements(limits)?;
        let order = all.len() as u128;
        let mut seeds: Vec<PcElement> = all
            .iter()
            .map(|x| self.power(x, self.prime as u128))
            .collect();
        for x in &all {
            for y in &all {
                seeds.push(self.commutator(x, y));
            }
        }
        let frattini = self.closure(seeds).len() as u128;
        let mut index = order / frattini;
        let mut rank = 0;
        while index > 1 {
            index /= self.prime as u128;
            rank += 1;
        }
        let mut derived_length = 0;
        let mut term: Vec<PcElement> = all;
        while term.len() > 1 {
            let mut comms = Vec::new();
            for x in &term {
                for y in &term {
                    comms.push(self.commutator(x, y));
                }
            }
            term = self.closure(comms).into_iter().collect();
            derived_length += 1;
        }
        Ok(PcInvariants {
            order,
            rank,
            derived_length,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const C4: &str = "GROUP 4 1\nPRIME 2\nNGENS 2\nPOWER 1 = g2^1\nEND\n";
    // D4 = <a, b, c | a^2 = 1, b^2 = c, c^2 = 1, [b,a] = c>
    pub(crate) const D4: &str =
        "GROUP 8 1\nPRIME 2\nNGENS 3\nPOWER 2 = g3^1\nCOMM 2 1 = g3^1\nEND\n";

    fn one(text: &str) -> PcPresentation {
        parse_pc_file(text).unwrap().remove(0).presentation
    }

    fn el(v: &[u32]) -> PcElement {
        PcElement(v.to_vec())
    }

    #[test]
    fn c2_fixture() {
        let recs = parse_pc_file("GROUP 2 1\nPRIME 2\nNGENS 1\nEND\n").unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].presentation.ngens(), 1);
        let g = recs[0].presentation.to_perm_group(&Limits::default()).unwrap();
        assert_eq!((g.order(), g.degree()), (2, 2));
    }

    #[test]
    fn identity_times_b() {
        let p = one(D4);
        for i in 0..8 {
            let b = p.element_at(i);
            assert_eq!(p.multiply(&p.identity(), &b), b);
        }
    }

    #[test]
    fn c4_power_relation() {
        let p = one(C4);
        assert_eq!(p.multiply(&el(&[1, 0]), &el(&[1, 0])), el(&[0, 1]));
        let g = p.to_perm_group(&Limits::default()).unwrap();
        assert_eq!((g.order(), g.degree()), (4, 4));
    }

    #[test]
    fn d4_collection_by_hand() {
        let p = one(D4);
        // a*a = 1
        assert_eq!(p.multiply(&el(&[1, 0, 0]), &el(&[1, 0, 0])), el(&[0, 0, 0]));
        // b*b = c
        assert_eq!(p.multiply(&el(&[0, 1, 0]), &el(&[0, 1, 0])), el(&[0, 0, 1]));
        // b*a = a*b*[b,a] = a b c
        assert_eq!(p.multiply(&el(&[0, 1, 0]), &el(&[1, 0, 0])), el(&[1, 1, 1]));
        // (a b)^2 = a b a b = a (b a) b = a a b c b = b c b = b b c = c^2 = 1
        let ab = el(&[1, 1, 0]);
        assert_eq!(p.multiply(&ab, &ab), el(&[0, 0, 0]));
    }

    #[test]
    fn d4_is_nonabelian_of_order_8() {
        let g = one(D4).to_perm_group(&Limits::default()).unwrap();
        assert_eq!(g.order(), 8);
        let (a, b) = (&g.generators()[0], &g.generators()[1]);
        assert_ne!(a.compose(b).unwrap(), b.compose(a).unwrap());
    }

    #[test]
    fn index_order_violation() {
        let text = "GROUP 4 1\nPRIME 2\nNGENS 2\nPOWER 2 = g1^1\nEND\n";
        let err = parse_pc_file(text).unwrap_err();
        assert!(matches!(err, GroupError::Parse { line: 4, ref msg } if msg.contains("index-order")), "{err}");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("GROUP 4 1\nPRIME 2\nNGENS 2\nPOWER 1 = g2^2\nEND\n", 4, "exponent"),
            ("GROUP 4 1\nPRIME 2\nNGENS 2\nPOWER 1 = h2\nEND\n", 4, "bad factor"),
            ("GROUP 8 1\nPRIME 2\nNGENS 2\nEND\n", 1, "order"),
            ("GROUP 2 1\nPRIME 2\nNGENS 1\nEND\nGROUP 2 1\nPRIME 2\nNGENS 1\nEND\n", 5, "duplicate"),
            ("GROUP 2 1\nPRIME 2\nNGENS 1\n", 1, "END"),
            ("PRIME 2\n", 1, "outside"),
            ("GROUP 9 1\nPRIME 3\nNGENS 2\nCOMM 1 2 = 1\nEND\n", 4, "j > i"),
            ("GROUP 8 1\nPRIME 2\nNGENS 3\nCOMM 3 1 = g2^1\nEND\n", 4, "index-order"),
            ("GROUP 8 1\nPRIME 2\nNGENS 3\nCOMM 2 1 = g3^1*g3^1\nEND\n", 4, "increasing"),
        ];
        for (text, line, needle) in cases {
            match parse_pc_file(text) {
                Err(GroupError::Parse { line: l, msg }) => {
                    assert_eq!(l, line, "{msg}");
                    assert!(msg.contains(needle), "{msg:?} lacks {needle:?}");
                }
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn comments_and_provenance() {
        let text = "# dataset\n# provenance: hand\nGROUP 2 1 # trailing\nPRIME 2\nNGENS 1\nEND\n";
        let recs = parse_pc_file(text).unwrap();
        assert_eq!(recs[0].provenance.as_deref(), Some("hand"));
    }

    #[test]
    fn serialization_is_idempotent() {
        let text = "GROUP 8 1\nPRIME 2\nNGENS 3\nCOMM 2 1 = g3\nPOWER 2 = g3^1\nEND\n";
        let once = serialize_pc_file(&parse_pc_file(text).unwrap());
        let twice = serialize_pc_file(&parse_pc_file(&once).unwrap());
        assert_eq!(once, twice);
        assert_eq!(parse_pc_file(&once).unwrap(), parse_pc_file(text).unwrap());
    }

    #[test]
    fn brute_force_invariants_of_d4() {
        let inv = one(D4).brute_force_invariants(&Limits::default()).unwrap();
        assert_eq!(inv, PcInvariants { order: 8, rank: 2, derived_length: 2 });
    }
}
