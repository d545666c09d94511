//! Stabilizer chains via Schreier-Sims.
//!
//! Two build paths: deterministic Schreier-Sims (Schreier generators sifted
//! level by level), and a seeded random variant that is used only when the
//! group order is known in advance, stopping once the chain reaches it.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::perm::Perm;

const ABSENT: u32 = u32::MAX;

/// One level of the chain: the base point, the strong generators fixing all
/// earlier base points, and a transversal of the basic orbit.
#[derive(Clone, Debug)]
pub struct Level {
    base: usize,
    gens: Vec<Perm>,
    orbit: Vec<usize>,
    slot: Vec<u32>,
    reps: Vec<Perm>,
    inv_reps: Vec<Perm>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Level {
        let mut slot = vec![ABSENT; degree];
        slot[base] = 0;
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            slot,
            reps: vec![Perm::identity(degree)],
            inv_reps: vec![Perm::identity(degree)],
        }
    }

    fn recompute(&mut self) {
        let degree = self.slot.len();
        for &x in &self.orbit {
            self.slot[x] = ABSENT;
        }
        self.orbit.clear();
        self.reps.clear();
        self.inv_reps.clear();
        self.orbit.push(self.base);
        self.slot[self.base] = 0;
        self.reps.push(Perm::identity(degree));
        self.inv_reps.push(Perm::identity(degree));
        let mut head = 0;
        while head < self.orbit.len() {
            let beta = self.orbit[head];
            for s in &self.gens {
                let gamma = s.apply(beta);
                if self.slot[gamma] == ABSENT {
                    let rep = &self.reps[head] * s;
                    self.slot[gamma] = self.orbit.len() as u32;
                    self.orbit.push(gamma);
                    self.inv_reps.push(rep.inverse());
                    self.reps.push(rep);
                }
            }
            head += 1;
        }
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn gens(&self) -> &[Perm] {
        &self.gens
    }

    pub fn orbit(&self) -> &[usize] {
        &self.orbit
    }

    pub fn in_orbit(&self, x: usize) -> bool {
        self.slot[x] != ABSENT
    }

    /// Transversal element mapping the base point to `x`.
    pub fn rep(&self, x: usize) -> Option<&Perm> {
        match self.slot[x] {
            ABSENT => None,
            k => Some(&self.reps[k as usize]),
        }
    }

    pub fn inv_rep(&self, x: usize) -> Option<&Perm> {
        match self.slot[x] {
            ABSENT => None,
            k => Some(&self.inv_reps[k as usize]),
        }
    }
}

/// Options for [`StabChain::build`].
#[derive(Clone, Copy, Default)]
pub struct BuildOptions<'a> {
    /// Base points forced to the front of the base, in this order.
    pub strict_prefix: &'a [usize],
    /// Preference order when a new base point has to be chosen.
    pub priority: Option<&'a [usize]>,
    /// Known group order, enabling the randomised build.
    pub order_hint: Option<&'a BigUint>,
}

#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn build(degree: usize, gens: &[Perm], opts: BuildOptions<'_>) -> StabChain {
        let mut chain = StabChain {
            degree,
            levels: opts.strict_prefix.iter().map(|&b| Level::new(b, degree)).collect(),
        };
        let rank = priority_rank(degree, opts.priority);
        let gens: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        for g in &gens {
            if chain.levels.iter().all(|l| g.apply(l.base) == l.base) {
                let b = pick_point(g, &rank);
                chain.levels.push(Level::new(b, degree));
            }
        }
        for lev in chain.levels.iter_mut() {
            lev.gens.clear();
        }
        for g in &gens {
            for lev in chain.levels.iter_mut() {
                lev.gens.push(g.clone());
                if g.apply(lev.base) != lev.base {
                    break;
                }
            }
        }
        for lev in chain.levels.iter_mut() {
            lev.recompute();
        }
        if gens.is_empty() {
            return chain;
        }
        if let Some(target) = opts.order_hint {
            if chain.random_complete(&gens, target, &rank) {
                return chain;
            }
            log::debug!("randomised chain build did not reach the hinted order; falling back");
        }
        chain.deterministic_complete(&rank);
        chain
    }

    fn add_strong_gen(&mut self, r: Perm, from: usize, to: usize, rank: &[usize]) {
        if to == self.levels.len() {
            let b = pick_point(&r, rank);
            self.levels.push(Level::new(b, self.degree));
        }
        for l in from..=to {
            self.levels[l].gens.push(r.clone());
            self.levels[l].recompute();
        }
    }

    fn deterministic_complete(&mut self, rank: &[usize]) {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let li = i as usize;
            let mut restart = None;
            'scan: for oi in 0..self.levels[li].orbit.len() {
                for si in 0..self.levels[li].gens.len() {
                    let lev = &self.levels[li];
                    let s = &lev.gens[si];
                    let beta = lev.orbit[oi];
                    let gamma = s.apply(beta);
                    let h = &(&lev.reps[oi] * s) * lev.inv_rep(gamma).expect("orbit closed");
                    if h.is_identity() {
                        continue;
                    }
                    let (r, j) = self.sift_from(&h, li + 1);
                    if !r.is_identity() {
                        self.add_strong_gen(r, li + 1, j, rank);
                        restart = Some(j);
                        break 'scan;
                    }
                }
            }
            match restart {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
    }

    fn random_complete(&mut self, gens: &[Perm], target: &BigUint, rank: &[usize]) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c4a1_u64 ^ self.degree as u64);
        let mut pool: Vec<Perm> = gens.to_vec();
        while pool.len() < 10 {
            pool.push(gens[pool.len() % gens.len()].clone());
        }
        let mut acc = Perm::identity(self.degree);
        let step = |rng: &mut ChaCha8Rng, pool: &mut Vec<Perm>, acc: &mut Perm| -> Perm {
            let i = rng.gen_range(0..pool.len());
            let mut j = rng.gen_range(0..pool.len() - 1);
            if j >= i {
                j += 1;
            }
            pool[i] = if rng.gen_bool(0.5) { &pool[i] * &pool[j] } else { &pool[j] * &pool[i] };
            *acc = &*acc * &pool[i];
            acc.clone()
        };
        for _ in 0..40 {
            step(&mut rng, &mut pool, &mut acc);
        }
        let mut misses = 0;
        while &self.order() < target {
            if misses > 200 + 20 * self.degree {
                return false;
            }
            let g = step(&mut rng, &mut pool, &mut acc);
            let (r, j) = self.sift_from(&g, 0);
            if r.is_identity() {
                misses += 1;
                continue;
            }
            misses = 0;
            self.add_strong_gen(r, 0, j, rank);
        }
        &self.order() == target
    }

    /// Sifts `g` through levels `start..`; returns the residue and the level
    /// where sifting stopped (`len()` if it passed every level).
    pub fn sift_from(&self, g: &Perm, start: usize) -> (Perm, usize) {
        let mut g = g.clone();
        for (l, lev) in self.levels.iter().enumerate().skip(start) {
            let b = g.apply(lev.base);
            match lev.slot[b] {
                ABSENT => return (g, l),
                k => g = &g * &lev.inv_reps[k as usize],
            }
        }
        (g, self.levels.len())
    }

    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (r, j) = self.sift_from(g, 0);
        j == self.levels.len() && r.is_identity()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Order of the stabilizer of the first `level` base points.
    pub fn order_from(&self, level: usize) -> BigUint {
        self.levels[level..]
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Generators of the stabilizer of the first `level` base points.
    pub fn stabilizer_gens(&self, level: usize) -> Vec<Perm> {
        self.levels.get(level).map(|l| l.gens.clone()).unwrap_or_default()
    }

    /// The chain of the stabilizer of the first `level` base points.
    pub fn suffix(&self, level: usize) -> StabChain {
        StabChain {
            degree: self.degree,
            levels: self.levels[level..].to_vec(),
        }
    }

    pub fn strong_generators(&self) -> Vec<Perm> {
        let mut out: Vec<Perm> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    /// Uniform random element: one random transversal element per level.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Perm {
        let mut g = Perm::identity(self.degree);
        for lev in self.levels.iter().rev() {
            let k = rng.gen_range(0..lev.reps.len());
            g = &g * &lev.reps[k];
        }
        g
    }

    /// Calls `f` on every element of the stabilizer of the first `level` base
    /// points, each exactly once.
    pub fn for_each_from<F: FnMut(&Perm)>(&self, level: usize, f: &mut F) {
        let id = Perm::identity(self.degree);
        self.walk(level, &id, f);
    }

    fn walk<F: FnMut(&Perm)>(&self, level: usize, suffix: &Perm, f: &mut F) {
        if level == self.levels.len() {
            f(suffix);
            return;
        }
        for rep in &self.levels[level].reps {
            let s = rep * suffix;
            self.walk(level + 1, &s, f);
        }
    }
}

fn priority_rank(degree: usize, priority: Option<&[usize]>) -> Vec<usize> {
    let mut rank = vec![usize::MAX; degree];
    if let Some(p) = priority {
        for (i, &x) in p.iter().enumerate() {
            if rank[x] == usize::MAX {
                rank[x] = i;
            }
        }
    }
    rank
}

fn pick_point(g: &Perm, rank: &[usize]) -> usize {
    (0..g.degree())
        .filter(|&x| g.apply(x) != x)
        .min_by_key(|&x| (rank[x], x))
        .expect("non-identity permutation moves a point")
}
