//! Permutations on the points `1..=degree`.
//!
//! Points are 1-based at the API boundary and 0-based in storage. Products
//! apply the left factor first: `a.compose(&b)` maps `x` to `b(a(x))`.

use std::fmt;

use crate::error::{GroupError, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its 1-based image list.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(GroupError::InvalidPerm("degree must be positive".into()));
        }
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &x in images {
            if x == 0 || x > n {
                return Err(GroupError::InvalidPerm(format!("point {x} out of range 1..={n}")));
            }
            if std::mem::replace(&mut seen[x - 1], true) {
                return Err(GroupError::InvalidPerm(format!("point {x} repeated")));
            }
            out.push((x - 1) as u32);
        }
        Ok(Perm { images: out })
    }

    /// Builds a permutation from disjoint cycles of 1-based points.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        if degree == 0 {
            return Err(GroupError::InvalidPerm("degree must be positive".into()));
        }
        let mut images: Vec<usize> = (1..=degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x == 0 || x > degree {
                    return Err(GroupError::InvalidPerm(format!("point {x} out of range 1..={degree}")));
                }
                if std::mem::replace(&mut touched[x - 1], true) {
                    return Err(GroupError::InvalidPerm(format!("point {x} in two cycles")));
                }
                images[x - 1] = cycle[(k + 1) % cycle.len()];
            }
        }
        Perm::from_images(&images)
    }

    pub(crate) fn from_raw(images: Vec<u32>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &x)| i as u32 == x)
        });
        Perm { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a 1-based point.
    pub fn image(&self, point: usize) -> usize {
        self.images[point - 1] as usize + 1
    }

    /// 1-based image list.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    #[inline]
    pub(crate) fn apply0(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Product with a degree check: the result applies `self` then `other`.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.degree() != other.degree() {
            return Err(GroupError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.mul(other))
    }

    #[inline]
    pub(crate) fn mul(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm { images: inv }
    }

    pub fn pow(&self, exp: i64) -> Perm {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Perm::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            sq = sq.mul(&sq);
            e >>= 1;
        }
        acc
    }

    /// `self^-1 * other^-1 * self * other`.
    pub fn commutator(&self, other: &Perm) -> Perm {
        self.inverse().mul(&other.inverse()).mul(self).mul(other)
    }

    /// `by^-1 * self * by`.
    pub fn conjugate(&self, by: &Perm) -> Perm {
        by.inverse().mul(self).mul(by)
    }

    /// Smallest 0-based point moved, if any.
    pub(crate) fn first_moved(&self) -> Option<u32> {
        self.images
            .iter()
            .enumerate()
            .find(|&(i, &x)| i as u32 != x)
            .map(|(i, _)| i as u32)
    }

    /// Element order (lcm of cycle lengths).
    pub fn order(&self) -> u128 {
        self.cycle_lengths()
            .into_iter()
            .fold(1u128, |acc, len| lcm(acc, len as u128))
    }

    fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            out.push(len);
        }
        out
    }

    /// Nontrivial cycles as 1-based point lists, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Embeds into a larger degree, moving points by `offset`.
    pub fn shifted(&self, offset: usize, degree: usize) -> Perm {
        debug_assert!(offset + self.degree() <= degree);
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for (i, &x) in self.images.iter().enumerate() {
            images[i + offset] = x + offset as u32;
        }
        Perm { images }
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u128, b: u128) -> u128 {
    a / gcd(a, b) * b
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{}]{}", self.degree(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Perm {
        Perm::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn transposition_squares_to_identity() {
        let t = cyc(2, &[&[1, 2]]);
        assert!(t.compose(&t).unwrap().is_identity());
    }

    #[test]
    fn four_cycle_square() {
        let c = cyc(4, &[&[1, 2, 3, 4]]);
        assert_eq!(c.compose(&c).unwrap(), cyc(4, &[&[1, 3], &[2, 4]]));
    }

    #[test]
    fn identity_law() {
        let a = cyc(5, &[&[1, 4, 2], &[3, 5]]);
        assert_eq!(a.compose(&Perm::identity(5)).unwrap(), a);
        assert_eq!(Perm::identity(5).compose(&a).unwrap(), a);
    }

    #[test]
    fn left_factor_applies_first() {
        let a = cyc(3, &[&[1, 2]]);
        let b = cyc(3, &[&[2, 3]]);
        let ab = a.compose(&b).unwrap();
        // 1 -a-> 2 -b-> 3
        assert_eq!(ab.image(1), 3);
        assert_eq!(ab.image(3), 2);
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let a = Perm::identity(3);
        let b = Perm::identity(4);
        assert_eq!(
            a.compose(&b),
            Err(GroupError::DegreeMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm::from_images(&[1, 1, 3]).is_err());
        assert!(Perm::from_images(&[0, 1]).is_err());
        assert!(Perm::from_images(&[]).is_err());
        assert!(Perm::from_cycles(3, &[&[1, 2], &[2, 3]]).is_err());
    }

    #[test]
    fn inverse_pow_and_order() {
        let a = cyc(6, &[&[1, 2, 3], &[4, 5]]);
        assert!(a.compose(&a.inverse()).unwrap().is_identity());
        assert_eq!(a.order(), 6);
        assert!(a.pow(6).is_identity());
        assert_eq!(a.pow(-1), a.inverse());
        assert_eq!(a.pow(4), a.mul(&a).mul(&a).mul(&a));
    }

    #[test]
    fn display_uses_cycle_notation() {
        assert_eq!(cyc(4, &[&[1, 3], &[2, 4]]).to_string(), "(1 3)(2 4)");
        assert_eq!(Perm::identity(3).to_string(), "()");
    }
}
