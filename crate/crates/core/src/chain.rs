//! Deterministic Schreier–Sims.
//!
//! Each level keeps its base point, the strong generators fixing all earlier
//! base points, and an explicit transversal `u_b` with `base^u_b = b`. Orbits
//! are only ever extended, so transversal entries never change once set; this
//! lets a level remember which (orbit point, generator) Schreier pairs have
//! already sifted to the identity.

use std::collections::HashMap;

use crate::perm::Perm;

#[derive(Clone, Debug)]
struct Level {
    base: u32,
    gens: Vec<Perm>,
    orbit: Vec<u32>,
    reps: Vec<Perm>,
    index: HashMap<u32, usize>,
    // number of generators already checked for each orbit point
    checked: Vec<usize>,
}

impl Level {
    fn new(base: u32, degree: usize) -> Self {
        let mut index = HashMap::new();
        index.insert(base, 0);
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            reps: vec![Perm::identity(degree)],
            index,
            checked: vec![0],
        }
    }

    /// Closes the orbit under the current generators, keeping existing reps.
    fn extend_orbit(&mut self) {
        let mut i = 0;
        while i < self.orbit.len() {
            let pt = self.orbit[i];
            for s in 0..self.gens.len() {
                let img = self.gens[s].apply0(pt);
                if !self.index.contains_key(&img) {
                    let rep = self.reps[i].mul(&self.gens[s]);
                    self.index.insert(img, self.orbit.len());
                    self.orbit.push(img);
                    self.reps.push(rep);
                    self.checked.push(0);
                }
            }
            i += 1;
        }
    }

    fn rep_of(&self, pt: u32) -> Option<&Perm> {
        self.index.get(&pt).map(|&i| &self.reps[i])
    }
}

#[derive(Clone, Debug)]
pub(crate) struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub(crate) fn trivial(degree: usize) -> Self {
        StabChain {
            degree,
            levels: Vec::new(),
        }
    }

    pub(crate) fn from_generators(degree: usize, gens: &[Perm]) -> Self {
        let mut chain = StabChain::trivial(degree);
        for g in gens {
            chain.add_generator(g);
        }
        chain
    }

    pub(crate) fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub(crate) fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub(crate) fn strong_generators(&self) -> &[Perm] {
        self.levels.first().map(|l| l.gens.as_slice()).unwrap_or(&[])
    }

    /// Order as a product of orbit lengths; `None` on u128 overflow.
    pub(crate) fn order(&self) -> Option<u128> {
        self.levels
            .iter()
            .try_fold(1u128, |acc, l| acc.checked_mul(l.orbit.len() as u128))
    }

    /// Sifts `g` starting at level `from`. Returns the residue and the index
    /// of the level where sifting stopped (`levels.len()` if it passed all).
    fn sift_from(&self, mut g: Perm, from: usize) -> (Perm, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let img = g.apply0(level.base);
            match level.rep_of(img) {
                Some(u) => g = g.mul(&u.inverse()),
                None => return (g, i),
            }
        }
        (g, self.levels.len())
    }

    pub(crate) fn contains(&self, g: &Perm) -> bool {
        debug_assert_eq!(g.degree(), self.degree);
        let (res, _) = self.sift_from(g.clone(), 0);
        res.is_identity()
    }

    /// Base-image-minimal representative of the right coset `self * g`.
    pub(crate) fn canonical_right_coset(&self, g: &Perm) -> Perm {
        let mut x = g.clone();
        for level in &self.levels {
            let (best, _) = level
                .orbit
                .iter()
                .enumerate()
                .min_by_key(|&(_, &pt)| x.apply0(pt))
                .expect("orbit contains the base point");
            x = level.reps[best].mul(&x);
        }
        x
    }

    /// Adds a generator; returns whether the group grew.
    pub(crate) fn add_generator(&mut self, g: &Perm) -> bool {
        if self.contains(g) {
            return false;
        }
        let nlevels = self.levels.len();
        let mut deepest = 0;
        for (i, level) in self.levels.iter_mut().enumerate() {
            level.gens.push(g.clone());
            deepest = i;
            if g.apply0(level.base) != level.base {
                break;
            }
            if i + 1 == nlevels {
                deepest = i + 1;
            }
        }
        if self.levels.is_empty() || deepest == self.levels.len() {
            let pt = g.first_moved().expect("non-identity generator");
            let mut level = Level::new(pt, self.degree);
            level.gens.push(g.clone());
            self.levels.push(level);
            deepest = self.levels.len() - 1;
        }
        for level in &mut self.levels[..=deepest] {
            level.extend_orbit();
        }
        self.complete_from(deepest);
        true
    }

    /// Holt's SCHREIERSIMS main loop. Levels strictly below `start` must
    /// already form a complete chain for the group they generate.
    fn complete_from(&mut self, start: usize) {
        let mut i = start as isize;
        while i >= 0 {
            let li = i as usize;
            match self.find_failing_schreier_gen(li) {
                Some((residue, j)) => {
                    if j == self.levels.len() {
                        let pt = residue.first_moved().expect("non-identity residue");
                        self.levels.push(Level::new(pt, self.degree));
                    }
                    for level in &mut self.levels[li + 1..=j] {
                        level.gens.push(residue.clone());
                        level.extend_orbit();
                    }
                    i = j as isize;
                }
                None => i -= 1,
            }
        }
    }

    fn find_failing_schreier_gen(&mut self, li: usize) -> Option<(Perm, usize)> {
        let mut b = 0;
        while b < self.levels[li].orbit.len() {
            while self.levels[li].checked[b] < self.levels[li].gens.len() {
                let s = self.levels[li].checked[b];
                let level = &self.levels[li];
                let u = &level.reps[b];
                let gen = &level.gens[s];
                let img = gen.apply0(level.orbit[b]);
                let v = level.rep_of(img).expect("orbit is closed");
                let h = u.mul(gen).mul(&v.inverse());
                if !h.is_identity() {
                    let (res, j) = self.sift_from(h, li + 1);
                    if !res.is_identity() {
                        return Some((res, j));
                    }
                }
                self.levels[li].checked[b] = s + 1;
            }
            b += 1;
        }
        None
    }

    /// All elements, as products of transversal elements from the deepest
    /// level up.
    pub(crate) fn elements(&self) -> Vec<Perm> {
        let mut cur = vec![Perm::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(cur.len() * level.reps.len());
            for u in &level.reps {
                for e in &cur {
                    next.push(e.mul(u));
                }
            }
            cur = next;
        }
        cur
    }
}
