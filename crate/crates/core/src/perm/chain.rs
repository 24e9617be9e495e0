//! Stabilizer chains built by Schreier–Sims.
//!
//! A randomized phase sifts product-replacement elements into the chain; a
//! deterministic pass then sifts every Schreier generator at every level, so
//! the resulting chain is always complete regardless of the random phase.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Permutation;

const ABSENT: u32 = u32::MAX;
const RANDOM_SIFT_STREAK: usize = 24;
pub(crate) const CHAIN_SEED: u64 = 0x5eed_c4a1_0000_0001;

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    /// Strong generators fixing every earlier base point.
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    /// Position of a point in `orbit`, or `ABSENT`.
    pos: Vec<u32>,
    /// `reps[k]` maps `base` to `orbit[k]`.
    reps: Vec<Permutation>,
}

impl Level {
    fn new(degree: usize, base: usize) -> Self {
        let mut level = Level {
            base,
            gens: Vec::new(),
            orbit: Vec::new(),
            pos: vec![ABSENT; degree],
            reps: Vec::new(),
        };
        level.rebuild_orbit(degree);
        level
    }

    fn rebuild_orbit(&mut self, degree: usize) {
        self.pos.iter_mut().for_each(|p| *p = ABSENT);
        self.orbit.clear();
        self.reps.clear();
        self.orbit.push(self.base);
        self.pos[self.base] = 0;
        self.reps.push(Permutation::identity(degree));
        let mut head = 0;
        while head < self.orbit.len() {
            let b = self.orbit[head];
            for s in &self.gens {
                let c = s.apply(b);
                if self.pos[c] == ABSENT {
                    self.pos[c] = self.orbit.len() as u32;
                    self.orbit.push(c);
                    let rep = self.reps[head].then(s);
                    self.reps.push(rep);
                }
            }
            head += 1;
        }
    }

    fn rep_of(&self, point: usize) -> Option<&Permutation> {
        match self.pos[point] {
            ABSENT => None,
            k => Some(&self.reps[k as usize]),
        }
    }
}

/// Base, strong generators and transversals for a permutation group.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(degree: usize, gens: &[Permutation]) -> Self {
        Self::with_base_prefix(degree, gens, &[])
    }

    /// Builds a chain whose base starts with `prefix` (repeated points are skipped).
    pub fn with_base_prefix(degree: usize, gens: &[Permutation], prefix: &[usize]) -> Self {
        let mut chain = StabChain {
            degree,
            levels: Vec::new(),
        };
        for &b in prefix {
            if chain.levels.iter().all(|l| l.base != b) {
                chain.levels.push(Level::new(degree, b));
            }
        }
        let gens: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        if gens.is_empty() {
            return chain;
        }
        for g in &gens {
            let to = chain.depth_fixing(g);
            chain.add_strong_gen(g.clone(), 0, to);
        }
        chain.random_phase(&gens);
        chain.complete();
        chain
    }

    /// Deepest level index `j` such that `g` fixes the base points of levels `< j`.
    fn depth_fixing(&self, g: &Permutation) -> usize {
        let mut j = 0;
        while j < self.levels.len() && g.apply(self.levels[j].base) == self.levels[j].base {
            j += 1;
        }
        j
    }

    /// Adds `g` to the generating sets of levels `from..=to` (creating a new
    /// level if `to` equals the current length) and refreshes their orbits.
    fn add_strong_gen(&mut self, g: Permutation, from: usize, to: usize) {
        if to == self.levels.len() {
            let moved = (0..self.degree)
                .find(|&x| g.apply(x) != x)
                .expect("identity passed as strong generator");
            self.levels.push(Level::new(self.degree, moved));
        }
        for l in from..=to {
            self.levels[l].gens.push(g.clone());
            self.levels[l].rebuild_orbit(self.degree);
        }
    }

    /// Sifts `g` starting at level `from`; returns the residue and the level at
    /// which sifting stopped (`levels.len()` means it went all the way through).
    pub(crate) fn strip(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for l in from..self.levels.len() {
            let level = &self.levels[l];
            let b = h.apply(level.base);
            match level.rep_of(b) {
                None => return (h, l),
                Some(u) => h = h.then(&u.inverse()),
            }
        }
        (h, self.levels.len())
    }

    fn random_phase(&mut self, gens: &[Permutation]) {
        let mut rng = ChaCha8Rng::seed_from_u64(CHAIN_SEED);
        let mut pr = ProductReplacement::new(gens, &mut rng);
        let mut streak = 0;
        let mut rounds = 0;
        while streak < RANDOM_SIFT_STREAK && rounds < 10_000 {
            rounds += 1;
            let g = pr.next(&mut rng);
            let (h, _) = self.strip(&g, 0);
            if h.is_identity() {
                streak += 1;
                continue;
            }
            streak = 0;
            let to = self.depth_fixing(&h);
            // h fixes base points of levels below `to`; it belongs to levels 1..=to
            let from = if to == 0 { 0 } else { 1 };
            self.add_strong_gen(h, from.min(to), to);
        }
    }

    /// Deterministic Schreier–Sims completion: every Schreier generator at
    /// every level must sift to the identity.
    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let lvl = i as usize;
            let mut jumped = None;
            'scan: for k in 0..self.levels[lvl].orbit.len() {
                for s_idx in 0..self.levels[lvl].gens.len() {
                    let level = &self.levels[lvl];
                    let b = level.orbit[k];
                    let s = &level.gens[s_idx];
                    let c = s.apply(b);
                    let sg = level.reps[k].then(s).then(&level.rep_of(c).unwrap().inverse());
                    if sg.is_identity() {
                        continue;
                    }
                    let (h, j) = self.strip(&sg, lvl + 1);
                    if !h.is_identity() {
                        debug_assert!(j > lvl);
                        let to = self.depth_fixing(&h).min(self.levels.len());
                        self.add_strong_gen(h, lvl + 1, to);
                        jumped = Some(to);
                        break 'scan;
                    }
                }
            }
            match jumped {
                Some(to) => i = to.min(self.levels.len() - 1) as isize,
                None => i -= 1,
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, j) = self.strip(g, 0);
        j == self.levels.len() && h.is_identity()
    }

    /// Strong generators of the stabilizer of the first `k` base points.
    pub fn level_generators(&self, k: usize) -> Vec<Permutation> {
        if k < self.levels.len() {
            self.levels[k].gens.clone()
        } else {
            Vec::new()
        }
    }

    /// Uniformly random element, as a product of random coset representatives.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in self.levels.iter().rev() {
            let k = rng.gen_range(0..level.reps.len());
            g = g.then(&level.reps[k]);
        }
        g
    }

    /// Visits every element of the group. Intended for small groups only.
    pub fn for_each_element<F: FnMut(&Permutation)>(&self, mut f: F) {
        // every element factors uniquely as u_k * ... * u_1 * u_0 (deepest level first)
        let identity = Permutation::identity(self.degree);
        let mut stack: Vec<(usize, Permutation)> = vec![(self.levels.len(), identity)];
        while let Some((depth, acc)) = stack.pop() {
            if depth == 0 {
                f(&acc);
                continue;
            }
            let level = &self.levels[depth - 1];
            for rep in level.reps.iter().rev() {
                stack.push((depth - 1, acc.then(rep)));
            }
        }
    }
}

/// Product replacement random element generator.
pub(crate) struct ProductReplacement {
    slots: Vec<Permutation>,
    acc: Permutation,
}

impl ProductReplacement {
    pub(crate) fn new<R: Rng>(gens: &[Permutation], rng: &mut R) -> Self {
        let degree = gens[0].degree();
        let mut slots: Vec<Permutation> = gens.to_vec();
        while slots.len() < 10 {
            let k = slots.len() % gens.len();
            slots.push(gens[k].clone());
        }
        let mut pr = ProductReplacement {
            slots,
            acc: Permutation::identity(degree),
        };
        for _ in 0..60 {
            pr.next(rng);
        }
        pr
    }

    pub(crate) fn next<R: Rng>(&mut self, rng: &mut R) -> Permutation {
        let n = self.slots.len();
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let other = if rng.gen_bool(0.5) {
            self.slots[j].clone()
        } else {
            self.slots[j].inverse()
        };
        self.slots[i] = if rng.gen_bool(0.5) {
            self.slots[i].then(&other)
        } else {
            other.then(&self.slots[i])
        };
        self.acc = self.acc.then(&self.slots[i]);
        self.acc.clone()
    }
}
