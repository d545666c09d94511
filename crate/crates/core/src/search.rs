//! Base-image backtrack search: normalisers inside an ambient group,
//! intersections, conjugating elements, plus brute-force oracles.

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::chain::{BuildOptions, StabChain};
use crate::error::{BudgetKind, Error, Result};
use crate::group::Group;
use crate::par::{self, Exec};
use crate::perm::Perm;

/// Limits on one search invocation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_time: Duration,
}

impl Default for SearchBudget {
    fn default() -> SearchBudget {
        SearchBudget {
            max_nodes: 10_000_000,
            max_time: Duration::from_secs(300),
        }
    }
}

impl SearchBudget {
    pub fn new(max_nodes: u64, max_time: Duration) -> Result<SearchBudget> {
        if max_nodes == 0 || max_time.is_zero() {
            return Err(Error::Invalid("search budgets must be positive".into()));
        }
        Ok(SearchBudget { max_nodes, max_time })
    }
}

pub(crate) struct Meter {
    nodes: u64,
    start: Instant,
    budget: SearchBudget,
}

impl Meter {
    pub(crate) fn new(budget: SearchBudget) -> Meter {
        Meter {
            nodes: 0,
            start: Instant::now(),
            budget,
        }
    }

    pub(crate) fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return Err(Error::BudgetExceeded(BudgetKind::Nodes));
        }
        if self.nodes % 1024 == 0 && self.start.elapsed() > self.budget.max_time {
            return Err(Error::BudgetExceeded(BudgetKind::Time));
        }
        Ok(())
    }
}

/// A property of group elements that can be tested on partial base images.
pub(crate) trait Predicate {
    /// `images[i]` is the image of `base[i]`; only the last entry is new.
    fn partial(&self, base: &[usize], images: &[usize]) -> bool;
    fn full(&self, g: &Perm) -> bool;
}

/// Generators of `{g in G : pred(g)}`, which must be a subgroup. `known`
/// lists elements already known to satisfy the predicate.
pub(crate) fn subgroup_search<P: Predicate>(
    chain: &StabChain,
    pred: &P,
    known: &[Perm],
    meter: &mut Meter,
) -> Result<Vec<Perm>> {
    let degree = chain.degree();
    let base = chain.base();
    let k = base.len();
    let mut found: Vec<Perm> = known.iter().filter(|g| !g.is_identity()).cloned().collect();
    let mut images: Vec<usize> = Vec::with_capacity(k);
    for l in (0..k).rev() {
        let stab_gens = |found: &[Perm]| -> Vec<Perm> {
            if found.is_empty() {
                return Vec::new();
            }
            Group::from_parts(degree, found.to_vec(), None)
                .pointwise_stabilizer(&base[..l])
                .generators()
                .to_vec()
        };
        let mut kstab = stab_gens(&found);
        let strong = |kstab: &[Perm]| -> Vec<Perm> {
            if kstab.is_empty() {
                return Vec::new();
            }
            let opts = BuildOptions {
                priority: Some(&base[l..]),
                ..Default::default()
            };
            StabChain::build(degree, kstab, opts).strong_generators()
        };
        let mut sgs = strong(&kstab);
        let level = &chain.levels()[l];
        let mut candidates: Vec<usize> = level.orbit().to_vec();
        candidates.sort_unstable();
        let mut covered = orbit_mask(degree, base[l], &kstab);
        let mut rejected = vec![false; degree];
        for gamma in candidates {
            if covered[gamma] || rejected[gamma] {
                continue;
            }
            meter.tick()?;
            images.clear();
            images.extend_from_slice(&base[..l]);
            images.push(gamma);
            let hit = if pred.partial(&base[..=l], &images) {
                let u = level.rep(gamma).expect("orbit point").clone();
                let mut ctx = Dfs {
                    chain,
                    base: &base,
                    pred,
                    top: l,
                    prune: &sgs,
                    meter,
                };
                ctx.run(l + 1, &u, &mut images)?
            } else {
                None
            };
            match hit {
                Some(g) => {
                    found.push(g);
                    kstab = stab_gens(&found);
                    sgs = strong(&kstab);
                    covered = orbit_mask(degree, base[l], &kstab);
                }
                None => {
                    for x in orbit_mask_points(degree, gamma, &kstab) {
                        rejected[x] = true;
                    }
                }
            }
        }
    }
    Ok(found)
}

/// Some element of the group satisfying `pred`, if any.
pub(crate) fn find_element<P: Predicate>(
    chain: &StabChain,
    pred: &P,
    meter: &mut Meter,
) -> Result<Option<Perm>> {
    let base = chain.base();
    let id = Perm::identity(chain.degree());
    let mut images = Vec::with_capacity(base.len());
    let mut ctx = Dfs {
        chain,
        base: &base,
        pred,
        top: 0,
        prune: &[],
        meter,
    };
    ctx.run(0, &id, &mut images)
}

/// Depth-first search below a fixed prefix of base images. Elements of
/// `prune` lie in the sought subgroup and fix `base[..top]`; at each depth
/// only images least in their orbit under those fixing the chosen images
/// are tried, which keeps at least one representative of every coset.
struct Dfs<'a, P: Predicate> {
    chain: &'a StabChain,
    base: &'a [usize],
    pred: &'a P,
    top: usize,
    prune: &'a [Perm],
    meter: &'a mut Meter,
}

impl<P: Predicate> Dfs<'_, P> {
    fn run(&mut self, depth: usize, suffix: &Perm, images: &mut Vec<usize>) -> Result<Option<Perm>> {
        self.meter.tick()?;
        if depth == self.base.len() {
            return Ok(if self.pred.full(suffix) { Some(suffix.clone()) } else { None });
        }
        let fixing: Vec<&Perm> = self
            .prune
            .iter()
            .filter(|k| images[self.top..].iter().all(|&x| k.apply(x) == x))
            .collect();
        let least = orbit_minima(self.chain.degree(), &fixing);
        let level = &self.chain.levels()[depth];
        let mut opts: Vec<(usize, usize)> = level
            .orbit()
            .iter()
            .map(|&d| (suffix.apply(d), d))
            .filter(|&(img, _)| least[img] == img)
            .collect();
        opts.sort_unstable();
        for (img, delta) in opts {
            images.push(img);
            if self.pred.partial(&self.base[..=depth], images) {
                let next = level.rep(delta).expect("orbit point") * suffix;
                if let Some(g) = self.run(depth + 1, &next, images)? {
                    images.pop();
                    return Ok(Some(g));
                }
            }
            images.pop();
        }
        Ok(None)
    }
}

/// Least point of each orbit of `gens`.
fn orbit_minima(degree: usize, gens: &[&Perm]) -> Vec<usize> {
    let mut least: Vec<usize> = (0..degree).collect();
    if gens.is_empty() {
        return least;
    }
    for x in 0..degree {
        if least[x] != x {
            continue;
        }
        let mut stack = vec![x];
        while let Some(y) = stack.pop() {
            for g in gens {
                let z = g.apply(y);
                if least[z] == z && z != x {
                    least[z] = x;
                    stack.push(z);
                }
            }
        }
    }
    least
}

fn orbit_mask(degree: usize, x: usize, gens: &[Perm]) -> Vec<bool> {
    let mut mask = vec![false; degree];
    for y in orbit_mask_points(degree, x, gens) {
        mask[y] = true;
    }
    mask
}

fn orbit_mask_points(degree: usize, x: usize, gens: &[Perm]) -> Vec<usize> {
    let mut seen = vec![false; degree];
    seen[x] = true;
    let mut orb = vec![x];
    let mut head = 0;
    while head < orb.len() {
        for g in gens {
            let z = g.apply(orb[head]);
            if !seen[z] {
                seen[z] = true;
                orb.push(z);
            }
        }
        head += 1;
    }
    orb
}

const PAIR_TABLE_LIMIT: usize = 256;

/// Point and point-pair invariants of a group, used to prune conjugation
/// searches: a conjugating element maps the structure at `x` for one group
/// onto the structure at `g(x)` for the other.
struct PointInvariants {
    orbit_id: Vec<usize>,
    orbit_size: Vec<usize>,
    suborbits: Vec<u64>,
    /// `label[x * n + y]`: index of the orbit of the stabilizer of `x`
    /// containing `y`; `size[..]` its length.
    pair_label: Vec<u16>,
    pair_size: Vec<u16>,
    /// `rooted[x]` maps the representative of x's orbit to x.
    rooted: Vec<Perm>,
}

impl PointInvariants {
    fn new(group: &Group) -> PointInvariants {
        let n = group.degree();
        let orbits = group.orbits();
        let mut orbit_id = vec![0; n];
        let mut orbit_size = vec![0; n];
        let mut suborbits = vec![0u64; n];
        let with_pairs = n <= PAIR_TABLE_LIMIT;
        let mut pair_label = if with_pairs { vec![0u16; n * n] } else { Vec::new() };
        let mut pair_size = if with_pairs { vec![0u16; n * n] } else { Vec::new() };
        let mut rooted = vec![Perm::identity(n); n];
        for (oi, orb) in orbits.iter().enumerate() {
            let r = orb[0];
            // transversal from r by BFS over generators
            let mut seen = vec![false; n];
            seen[r] = true;
            let mut queue = vec![r];
            let mut head = 0;
            while head < queue.len() {
                let x = queue[head];
                for g in group.generators() {
                    let y = g.apply(x);
                    if !seen[y] {
                        seen[y] = true;
                        rooted[y] = &rooted[x] * g;
                        queue.push(y);
                    }
                }
                head += 1;
            }
            let stab = group.point_stabilizer(r);
            let sub = stab.orbits();
            let mut lens: Vec<usize> = sub.iter().map(|o| o.len()).collect();
            lens.sort_unstable();
            let sig = lens.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &l| {
                (h ^ l as u64).wrapping_mul(0x100_0000_01b3)
            });
            let mut label_r = vec![0u16; n];
            let mut size_r = vec![0u16; n];
            for (si, o) in sub.iter().enumerate() {
                for &y in o {
                    label_r[y] = si as u16;
                    size_r[y] = o.len().min(u16::MAX as usize) as u16;
                }
            }
            for &x in orb {
                orbit_id[x] = oi;
                orbit_size[x] = orb.len();
                suborbits[x] = sig;
                if with_pairs {
                    let t = &rooted[x];
                    for y in 0..n {
                        pair_label[x * n + t.apply(y)] = label_r[y];
                        pair_size[x * n + t.apply(y)] = size_r[y];
                    }
                }
            }
        }
        PointInvariants {
            orbit_id,
            orbit_size,
            suborbits,
            pair_label,
            pair_size,
            rooted,
        }
    }

    fn has_pairs(&self) -> bool {
        !self.pair_label.is_empty()
    }
}

/// Elements `g` with `g^-1 a g` in `target` for every generator `a` of
/// `source` (equal orders assumed), i.e. `g` carries `source` onto `target`.
struct ConjugationPredicate<'a> {
    source: &'a Group,
    target: &'a Group,
    src: PointInvariants,
    tgt: PointInvariants,
    n: usize,
    /// Elements of a small target, bucketed by `(x, image of x)`.
    by_image: Option<Vec<Vec<Perm>>>,
}

const ELEMENT_TABLE_LIMIT: u64 = 4096;

fn element_table(g: &Group) -> Option<Vec<Vec<Perm>>> {
    if g.small_order()? > ELEMENT_TABLE_LIMIT {
        return None;
    }
    let n = g.degree();
    let mut table = vec![Vec::new(); n * n];
    for e in g.elements() {
        for x in 0..n {
            table[x * n + e.apply(x)].push(e.clone());
        }
    }
    Some(table)
}

impl<'a> ConjugationPredicate<'a> {
    fn new(source: &'a Group, target: &'a Group) -> ConjugationPredicate<'a> {
        let src = PointInvariants::new(source);
        let tgt = if std::ptr::eq(source, target) {
            PointInvariants::new(source)
        } else {
            PointInvariants::new(target)
        };
        ConjugationPredicate {
            source,
            target,
            src,
            tgt,
            n: source.degree(),
            by_image: element_table(target),
        }
    }

    /// Whether some element of the target agrees with every constraint that
    /// `a^g` inherits from the partial images.
    fn exact_ok(&self, table: &[Vec<Perm>], a: &Perm, base: &[usize], images: &[usize]) -> bool {
        let j = base.len() - 1;
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for (i, &b) in base.iter().enumerate() {
            if let Some(m) = base.iter().position(|&x| x == a.apply(b)) {
                if i == j || m == j {
                    pairs.insert(0, (images[i], images[m]));
                } else {
                    pairs.push((images[i], images[m]));
                }
            }
        }
        let Some(&(x, y)) = pairs.first() else {
            return true;
        };
        table[x * self.n + y].iter().any(|c| pairs[1..].iter().all(|&(u, v)| c.apply(u) == v))
    }

    /// Whether some element of the target maps `x1 -> y1` and `x2 -> y2`
    /// (necessary condition only when the pair table is absent).
    fn two_point_ok(&self, x1: usize, y1: usize, x2: usize, y2: usize) -> bool {
        let t = &self.tgt;
        if t.orbit_id[x1] != t.orbit_id[y1] || t.orbit_id[x2] != t.orbit_id[y2] {
            return false;
        }
        if !t.has_pairs() {
            return true;
        }
        // u0 = t_x1^-1 * t_y1 maps x1 -> y1
        let back = t.rooted[y1].inverse().apply(y2);
        let z = t.rooted[x1].apply(back);
        let n = self.n;
        t.pair_label[x1 * n + x2] == t.pair_label[x1 * n + z]
    }
}

impl Predicate for ConjugationPredicate<'_> {
    fn partial(&self, base: &[usize], images: &[usize]) -> bool {
        let j = base.len() - 1;
        let (bj, gj) = (base[j], images[j]);
        let (s, t) = (&self.src, &self.tgt);
        if s.orbit_size[bj] != t.orbit_size[gj] || s.suborbits[bj] != t.suborbits[gj] {
            return false;
        }
        let n = self.n;
        for i in 0..j {
            let (bi, gi) = (base[i], images[i]);
            if (s.orbit_id[bi] == s.orbit_id[bj]) != (t.orbit_id[gi] == t.orbit_id[gj]) {
                return false;
            }
            if s.has_pairs()
                && (s.pair_size[bi * n + bj] != t.pair_size[gi * n + gj]
                    || s.pair_size[bj * n + bi] != t.pair_size[gj * n + gi])
            {
                return false;
            }
        }
        // generator constraints: a(b_i) = b_m forces c(g_i) = g_m for c = a^g
        if let Some(table) = &self.by_image {
            return self.source.generators().iter().all(|a| self.exact_ok(table, a, base, images));
        }
        for a in self.source.generators() {
            let mut anchor: Option<(usize, usize)> = None;
            for i in 0..=j {
                let ai = a.apply(base[i]);
                let Some(m) = base[..=j].iter().position(|&b| b == ai) else {
                    continue;
                };
                if i != j && m != j {
                    if anchor.is_none() {
                        anchor = Some((images[i], images[m]));
                    }
                    continue;
                }
                let (x, y) = (images[i], images[m]);
                match anchor {
                    None => {
                        if t.orbit_id[x] != t.orbit_id[y] {
                            return false;
                        }
                        anchor = Some((x, y));
                    }
                    Some((x1, y1)) => {
                        if !self.two_point_ok(x1, y1, x, y) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn full(&self, g: &Perm) -> bool {
        self.source
            .generators()
            .iter()
            .all(|a| self.target.contains(&a.conjugate_by(g)))
    }
}

/// Membership in `other`, checked on partial base images through a chain
/// of `other` whose base starts with the search base.
struct MembershipPredicate {
    chain: StabChain,
}

impl Predicate for MembershipPredicate {
    fn partial(&self, base: &[usize], images: &[usize]) -> bool {
        let levels = self.chain.levels();
        let mut q: Option<Perm> = None;
        for i in 0..base.len() {
            let y = match &q {
                Some(q) => q.apply(images[i]),
                None => images[i],
            };
            let lev = &levels[i];
            debug_assert_eq!(lev.base(), base[i]);
            let Some(inv) = lev.inv_rep(y) else {
                return false;
            };
            q = Some(match q {
                Some(q) => &q * inv,
                None => inv.clone(),
            });
        }
        true
    }

    fn full(&self, g: &Perm) -> bool {
        self.chain.contains(g)
    }
}

/// Base priority: orbits of `u` largest first, each walked breadth-first
/// from its least point.
fn orbit_priority(u: &Group) -> Vec<usize> {
    let mut orbs = u.orbits();
    orbs.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let n = u.degree();
    let mut seen = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for o in orbs {
        let start = o[0];
        seen[start] = true;
        let mut queue = vec![start];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            out.push(x);
            for g in u.generators() {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    queue.push(y);
                }
            }
            head += 1;
        }
    }
    out
}

/// `N_G(U)`: the elements of `G` conjugating `U` onto itself.
pub fn normaliser_in(g: &Group, u: &Group, budget: SearchBudget) -> Result<Group> {
    if g.degree() != u.degree() {
        return Err(Error::DegreeMismatch(g.degree(), u.degree()));
    }
    if !u.is_subgroup_of(g) {
        return Err(Error::NotSubgroup("U is not contained in G".into()));
    }
    if g.generators().iter().all(|s| u.is_normalised_by(s)) {
        return Ok(g.clone());
    }
    let priority = orbit_priority(u);
    let chain = g.chain_with(&[], Some(&priority));
    let pred = ConjugationPredicate::new(u, u);
    let mut known: Vec<Perm> = u.generators().to_vec();
    known.extend(g.generators().iter().filter(|s| u.is_normalised_by(s)).cloned());
    let mut meter = Meter::new(budget);
    let gens = subgroup_search(&chain, &pred, &known, &mut meter)?;
    Ok(Group::from_parts(g.degree(), gens, None))
}

/// `G ∩ H`.
pub fn intersection(g: &Group, h: &Group, budget: SearchBudget) -> Result<Group> {
    if g.degree() != h.degree() {
        return Err(Error::DegreeMismatch(g.degree(), h.degree()));
    }
    if g.is_subgroup_of(h) {
        return Ok(g.clone());
    }
    if h.is_subgroup_of(g) {
        return Ok(h.clone());
    }
    // search the smaller group
    let (small, big) = if g.order() <= h.order() { (g, h) } else { (h, g) };
    let chain = small.chain().clone();
    let pred = MembershipPredicate {
        chain: big.chain_with(&chain.base(), None),
    };
    let known: Vec<Perm> = small
        .generators()
        .iter()
        .chain(big.generators())
        .filter(|x| small.contains(x) && big.contains(x))
        .cloned()
        .collect();
    let mut meter = Meter::new(budget);
    let gens = subgroup_search(&chain, &pred, &known, &mut meter)?;
    Ok(Group::from_parts(g.degree(), gens, None))
}

fn order_statistics(g: &Group) -> Option<Vec<(u64, usize)>> {
    if g.small_order()? > 5000 {
        return None;
    }
    let mut counts: HashMap<u64, usize> = HashMap::new();
    for x in g.elements() {
        *counts.entry(x.order()).or_default() += 1;
    }
    let mut v: Vec<_> = counts.into_iter().collect();
    v.sort_unstable();
    Some(v)
}

/// Some `s` in `Sym(n)` with `A.conjugate(s) = B`, or `None`.
pub fn conjugating_element(a: &Group, b: &Group, budget: SearchBudget) -> Result<Option<Perm>> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch(a.degree(), b.degree()));
    }
    let n = a.degree();
    if a.order() != b.order() {
        return Ok(None);
    }
    let sizes = |g: &Group| {
        let mut v: Vec<usize> = g.orbits().iter().map(|o| o.len()).collect();
        v.sort_unstable();
        v
    };
    if sizes(a) != sizes(b) {
        return Ok(None);
    }
    if a.same_group(b) {
        return Ok(Some(Perm::identity(n)));
    }
    if let (Some(x), Some(y)) = (order_statistics(a), order_statistics(b)) {
        if x != y {
            return Ok(None);
        }
    }
    let priority = orbit_priority(a);
    let sym = Group::symmetric(n);
    let chain = sym.chain_with(&priority, None);
    let pred = ConjugationPredicate::new(a, b);
    let mut meter = Meter::new(budget);
    find_element(&chain, &pred, &mut meter)
}

/// Hard degree cap of [`oracle_normaliser`].
pub const ORACLE_DEGREE_CAP: usize = 10;

/// Exact `N_{S_n}(U)` by testing every element of `S_n`. Test oracle only.
pub fn oracle_normaliser(u: &Group) -> Result<Group> {
    oracle_normaliser_with(u, Exec::default())
}

pub fn oracle_normaliser_with(u: &Group, exec: Exec) -> Result<Group> {
    let n = u.degree();
    if n > ORACLE_DEGREE_CAP {
        return Err(Error::DegreeCap {
            degree: n,
            cap: ORACLE_DEGREE_CAP,
        });
    }
    let sym = Group::symmetric(n);
    let chain = sym.chain();
    let top: Vec<Perm> = chain.levels().first().map(|l| {
        l.orbit().iter().map(|&x| l.rep(x).unwrap().clone()).collect()
    }).unwrap_or_else(|| vec![Perm::identity(n)]);
    let chunks: Vec<Vec<Perm>> = par::map(exec, &top, |u0| {
        let mut hits = Vec::new();
        if chain.levels().is_empty() {
            if u.is_normalised_by(u0) {
                hits.push(u0.clone());
            }
            return hits;
        }
        chain.for_each_from(1, &mut |w| {
            let g = w * u0;
            if u.is_normalised_by(&g) {
                hits.push(g);
            }
        });
        hits
    });
    let total: usize = chunks.iter().map(Vec::len).sum();
    let mut result = Group::trivial(n);
    for g in chunks.iter().flatten() {
        if !result.contains(g) {
            result = result.extended(std::slice::from_ref(g));
        }
    }
    debug_assert_eq!(result.order(), BigUint::from(total));
    Ok(result.with_order(BigUint::from(total)))
}

/// Default cap of [`all_subgroups`].
pub const SUBGROUP_ENUMERATION_CAP: u64 = 2000;

/// Every subgroup of `g`, each once, by cyclic extension.
pub fn all_subgroups(g: &Group, cap: u64) -> Result<Vec<Group>> {
    let order = g.order().to_u64().filter(|&o| o <= cap).ok_or(Error::OrderCap(cap))?;
    let elems = g.elements();
    debug_assert_eq!(elems.len() as u64, order);
    let m = elems.len();
    let index: HashMap<&Perm, usize> = elems.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mul = |a: usize, b: usize| -> usize { index[&(&elems[a] * &elems[b])] };
    let id = index[&Perm::identity(g.degree())];
    let words = m.div_ceil(64);

    let closure = |gens: &[usize]| -> Vec<u64> {
        let mut bits = vec![0u64; words];
        bits[id / 64] |= 1 << (id % 64);
        let mut queue = vec![id];
        while let Some(x) = queue.pop() {
            for &s in gens {
                let y = mul(x, s);
                if bits[y / 64] & (1 << (y % 64)) == 0 {
                    bits[y / 64] |= 1 << (y % 64);
                    queue.push(y);
                }
            }
        }
        bits
    };
    let has = |bits: &[u64], x: usize| bits[x / 64] & (1 << (x % 64)) != 0;

    // one generator per cyclic subgroup
    let mut cyclic: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut seen_cyclic: HashSet<Vec<u64>> = HashSet::new();
    for x in 0..m {
        let c = closure(&[x]);
        if seen_cyclic.insert(c.clone()) {
            cyclic.push((x, c));
        }
    }
    let mut subgroups: Vec<(Vec<usize>, Vec<u64>)> = Vec::new();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    for (x, c) in &cyclic {
        if seen.insert(c.clone()) {
            let gens = if *x == id { vec![] } else { vec![*x] };
            subgroups.push((gens, c.clone()));
        }
    }
    let mut head = 0;
    while head < subgroups.len() {
        let (gens, bits) = subgroups[head].clone();
        for (x, _) in &cyclic {
            if has(&bits, *x) {
                continue;
            }
            let mut ng = gens.clone();
            ng.push(*x);
            let nb = closure(&ng);
            if seen.insert(nb.clone()) {
                subgroups.push((ng, nb));
            }
        }
        head += 1;
    }
    Ok(subgroups
        .into_iter()
        .map(|(gens, bits)| {
            let size = bits.iter().map(|w| w.count_ones() as usize).sum::<usize>();
            Group::from_parts(
                g.degree(),
                gens.into_iter().map(|i| elems[i].clone()).collect(),
                Some(BigUint::from(size)),
            )
        })
        .collect())
}
