//! Permutation groups given by generators, with a lazily built stabilizer chain.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::Rng;

use crate::chain::{BuildOptions, StabChain};
use crate::error::{Error, Result};
use crate::perm::Perm;

/// A permutation group of fixed degree.
///
/// The chain is built on first use and shared by clones; concurrent first
/// queries initialise it exactly once.
#[derive(Clone)]
pub struct Group {
    degree: usize,
    gens: Vec<Perm>,
    order_hint: Option<BigUint>,
    chain: Arc<OnceLock<StabChain>>,
}

impl Group {
    pub fn new(degree: usize, gens: Vec<Perm>) -> Result<Group> {
        if degree == 0 {
            return Err(Error::Invalid("degree must be positive".into()));
        }
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch(degree, g.degree()));
        }
        Ok(Group::from_parts(degree, gens, None))
    }

    pub(crate) fn from_parts(degree: usize, gens: Vec<Perm>, order_hint: Option<BigUint>) -> Group {
        let mut uniq: Vec<Perm> = Vec::with_capacity(gens.len());
        for g in gens {
            if !g.is_identity() && !uniq.contains(&g) {
                uniq.push(g);
            }
        }
        Group {
            degree,
            gens: uniq,
            order_hint,
            chain: Arc::new(OnceLock::new()),
        }
    }

    /// Attaches a known order, which speeds up the chain build. The hint
    /// must be correct.
    pub fn with_order(mut self, order: BigUint) -> Group {
        self.order_hint = Some(order);
        self
    }

    pub fn trivial(degree: usize) -> Group {
        Group::from_parts(degree, Vec::new(), Some(BigUint::one()))
    }

    pub fn symmetric(degree: usize) -> Group {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(transposition(degree, 0, 1));
            gens.push(cycle(degree, &(0..degree).collect::<Vec<_>>()));
        }
        Group::from_parts(degree, gens, Some(factorial(degree)))
    }

    pub fn alternating(degree: usize) -> Group {
        let mut gens = Vec::new();
        if degree >= 3 {
            for i in 2..degree {
                gens.push(cycle(degree, &[0, 1, i]));
            }
        }
        let order = if degree >= 2 { factorial(degree) / 2u32 } else { BigUint::one() };
        Group::from_parts(degree, gens, Some(order))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn chain(&self) -> &StabChain {
        self.chain.get_or_init(|| {
            StabChain::build(
                self.degree,
                &self.gens,
                BuildOptions {
                    order_hint: self.order_hint.as_ref(),
                    ..Default::default()
                },
            )
        })
    }

    /// A fresh chain with a chosen base prefix; not cached.
    pub fn chain_with(&self, strict_prefix: &[usize], priority: Option<&[usize]>) -> StabChain {
        let order = self.order();
        StabChain::build(
            self.degree,
            &self.gens,
            BuildOptions {
                strict_prefix,
                priority,
                order_hint: Some(&order),
            },
        )
    }

    pub fn order(&self) -> BigUint {
        match &self.order_hint {
            Some(o) => o.clone(),
            None => self.chain().order(),
        }
    }

    /// Order as `u64` when it fits.
    pub fn small_order(&self) -> Option<u64> {
        self.order().to_u64()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        p.degree() == self.degree && (p.is_identity() || self.chain().contains(p))
    }

    pub fn is_subgroup_of(&self, other: &Group) -> bool {
        self.degree == other.degree && self.gens.iter().all(|g| other.contains(g))
    }

    /// Equal degree, equal order and mutual generator containment.
    pub fn same_group(&self, other: &Group) -> bool {
        self.degree == other.degree
            && self.order() == other.order()
            && self.is_subgroup_of(other)
            && other.is_subgroup_of(self)
    }

    pub fn orbit_of(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        let mut orb = vec![x];
        seen[x] = true;
        let mut head = 0;
        while head < orb.len() {
            let y = orb[head];
            for g in &self.gens {
                let z = g.apply(y);
                if !seen[z] {
                    seen[z] = true;
                    orb.push(z);
                }
            }
            head += 1;
        }
        orb.sort_unstable();
        orb
    }

    /// Orbits sorted internally, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_of(self.degree, &self.gens)
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit_of(0).len() == self.degree
    }

    pub fn point_stabilizer(&self, x: usize) -> Group {
        let c = self.chain_with(&[x], None);
        let order = c.order_from(1);
        Group::from_parts(self.degree, c.stabilizer_gens(1), Some(order))
    }

    /// Pointwise stabilizer of a sequence of points.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> Group {
        let c = self.chain_with(points, None);
        let order = c.order_from(points.len());
        Group::from_parts(self.degree, c.stabilizer_gens(points.len()), Some(order))
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Perm {
        self.chain().random_element(rng)
    }

    /// Whether conjugation by `s` maps the group onto itself.
    pub fn is_normalised_by(&self, s: &Perm) -> bool {
        self.gens.iter().all(|g| self.contains(&g.conjugate_by(s)))
    }

    /// Whether `self` is a normal subgroup of `g` (containment included).
    pub fn is_normal_in(&self, g: &Group) -> bool {
        self.is_subgroup_of(g) && g.gens.iter().all(|s| self.is_normalised_by(s))
    }

    /// The group with its points renamed by `s`: generators `s^-1 g s`.
    pub fn conjugate(&self, s: &Perm) -> Group {
        Group::from_parts(
            self.degree,
            self.gens.iter().map(|g| g.conjugate_by(s)).collect(),
            Some(self.order()),
        )
    }

    /// Group generated by `self` and extra elements.
    pub fn extended(&self, extra: &[Perm]) -> Group {
        let mut gens = self.gens.clone();
        gens.extend(extra.iter().cloned());
        Group::from_parts(self.degree, gens, None)
    }

    /// Group generated by the union of two generating sets.
    pub fn join(&self, other: &Group) -> Group {
        self.extended(&other.gens)
    }

    /// All elements; intended for small groups.
    pub fn elements(&self) -> Vec<Perm> {
        let mut out = Vec::new();
        self.chain().for_each_from(0, &mut |g| out.push(g.clone()));
        out
    }

    /// Smallest normal subgroup of `self` containing `gens`.
    pub fn normal_closure(&self, gens: &[Perm]) -> Group {
        let mut closure = Group::from_parts(self.degree, gens.to_vec(), None);
        let mut queue: Vec<Perm> = closure.gens.clone();
        while let Some(x) = queue.pop() {
            for g in &self.gens {
                let y = x.conjugate_by(g);
                if !closure.contains(&y) {
                    closure = closure.extended(std::slice::from_ref(&y));
                    queue.push(y);
                }
            }
        }
        closure
    }

    pub fn derived_subgroup(&self) -> Group {
        let mut comms = Vec::new();
        for (i, a) in self.gens.iter().enumerate() {
            for b in &self.gens[i + 1..] {
                let c = &(&(&a.inverse() * &b.inverse()) * a) * b;
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        self.normal_closure(&comms)
    }

    /// Orbit lengths of the point stabilizer of `x`, as a sorted list.
    pub fn suborbit_lengths(&self, x: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.point_stabilizer(x).orbits().iter().map(|o| o.len()).collect();
        v.sort_unstable();
        v
    }

    pub fn to_cycle_strings(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.to_string()).collect()
    }

    /// Parses the group text format: `degree <n>` followed by one
    /// permutation per line in cycle notation; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Group> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty group file".into()))?;
        let n: usize = header
            .strip_prefix("degree")
            .map(str::trim)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("expected `degree <n>`, got {header:?}")))?;
        if n == 0 {
            return Err(Error::Parse("degree must be positive".into()));
        }
        let gens = lines.map(|l| Perm::from_cycles(l, n)).collect::<Result<Vec<_>>>()?;
        Group::new(n, gens)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("degree {}\n", self.degree);
        for g in &self.gens {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group(degree {}, <", self.degree)?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">)")
    }
}

pub fn orbits_of(degree: usize, gens: &[Perm]) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; degree];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for start in 0..degree {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        label[start] = id;
        let mut orb = vec![start];
        let mut head = 0;
        while head < orb.len() {
            let y = orb[head];
            for g in gens {
                let z = g.apply(y);
                if label[z] == usize::MAX {
                    label[z] = id;
                    orb.push(z);
                }
            }
            head += 1;
        }
        orb.sort_unstable();
        out.push(orb);
    }
    out
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

pub(crate) fn transposition(degree: usize, a: usize, b: usize) -> Perm {
    cycle(degree, &[a, b])
}

pub(crate) fn cycle(degree: usize, points: &[usize]) -> Perm {
    let mut imgs: Vec<u32> = (0..degree as u32).collect();
    for (i, &x) in points.iter().enumerate() {
        imgs[x] = points[(i + 1) % points.len()] as u32;
    }
    Perm::from_images_unchecked(imgs)
}
