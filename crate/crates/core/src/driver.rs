//! The overgroup chain: transitive and intransitive normaliser algorithms
//! and the top-level dispatch.

use log::debug;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::actions::{block_action, coset_action, orbit_action, wreath_product, GroupHom};
use crate::blocks::{block_stabilizer, block_restriction, principal_block_systems, BlockSystem};
use crate::codes::{code_refine, is_prime};
use crate::error::{Error, Result};
use crate::graphaut::graph_overgroup;
use crate::group::{factorial, Group};
use crate::intransitive::{dpwp_overgroup, orbit_sort};
use crate::perm::Perm;
use crate::search::{intersection, normaliser_in, SearchBudget};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainConfig {
    /// Transitive groups up to this degree go straight to the backtrack.
    pub cutoff_transitive: usize,
    /// Transitive groups of order at most `small_order_factor * n` too.
    pub small_order_factor: usize,
    /// Intransitive groups up to this degree go straight to the backtrack.
    pub cutoff_intransitive: usize,
    /// Index of `G` in the overgroup above which block quotients are tried.
    pub large_index: u64,
    /// Budget of each optional refinement step.
    pub step_budget: SearchBudget,
    /// Budget of the final normaliser search.
    pub final_budget: SearchBudget,
    pub seed: u64,
}

impl Default for ChainConfig {
    fn default() -> ChainConfig {
        ChainConfig {
            cutoff_transitive: 35,
            small_order_factor: 6,
            cutoff_intransitive: 24,
            large_index: 1_000_000,
            step_budget: SearchBudget::default(),
            final_budget: SearchBudget::default(),
            seed: 0,
        }
    }
}

impl ChainConfig {
    /// Every step of the chain is exercised, whatever the input size.
    pub fn full_chain() -> ChainConfig {
        ChainConfig {
            cutoff_transitive: 0,
            small_order_factor: 0,
            cutoff_intransitive: 0,
            large_index: 0,
            ..ChainConfig::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub label: String,
    pub order: BigUint,
    pub index: BigUint,
}

/// The overgroups produced along the chain, checked as they are added.
#[derive(Debug, Clone, Default)]
pub struct ChainTrace {
    pub steps: Vec<TraceStep>,
    pub notes: Vec<String>,
    pub final_order: Option<BigUint>,
}

impl ChainTrace {
    /// Records `h` after checking that it contains `g` and does not grow.
    fn record(&mut self, label: impl Into<String>, h: &Group, g: &Group) -> Result<()> {
        let label = label.into();
        if !g.is_subgroup_of(h) {
            return Err(Error::ChainViolation(format!("{label}: overgroup misses G")));
        }
        let order = h.order();
        if let Some(last) = self.steps.last() {
            if order > last.order {
                return Err(Error::ChainViolation(format!("{label}: order grew from {} to {order}", last.order)));
            }
        }
        let index = &order / g.order();
        debug!("{label}: order {order}, index {index}");
        self.steps.push(TraceStep { label, order, index });
        Ok(())
    }

    fn note(&mut self, msg: String) {
        debug!("{msg}");
        self.notes.push(msg);
    }

    pub fn to_json(&self) -> Value {
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| json!({"step": s.label, "order": s.order.to_string(), "index": s.index.to_string()}))
            .collect();
        json!({
            "steps": steps,
            "notes": self.notes,
            "final_order": self.final_order.as_ref().map(|o| o.to_string()),
        })
    }

    /// Index of `G` in the overgroup recorded under `label`.
    pub fn index_at(&self, label: &str) -> Option<&BigUint> {
        self.steps.iter().find(|s| s.label == label).map(|s| &s.index)
    }
}

fn skippable(e: &Error) -> bool {
    matches!(e, Error::BudgetExceeded(_) | Error::IndexCap(_) | Error::OrderCap(_))
}

/// Runs an optional refinement; failures of budget or size are noted and
/// leave `h` unchanged.
fn step<F>(trace: &mut ChainTrace, label: &str, h: &mut Group, g: &Group, f: F) -> Result<()>
where
    F: FnOnce(&Group) -> Result<Group>,
{
    match f(h) {
        Ok(next) => {
            if next.order() < h.order() {
                trace.record(label, &next, g)?;
                *h = next;
            } else if !g.is_subgroup_of(&next) {
                return Err(Error::ChainViolation(format!("{label}: overgroup misses G")));
            }
            Ok(())
        }
        Err(e) if skippable(&e) => {
            trace.note(format!("{label} skipped: {e}"));
            Ok(())
        }
        Err(e) => Err(e),
    }
}

/// `f^-1(N_{f(H)}(f(G)))` for a hom `f` defined on `H`.
pub fn refine_by_hom(h: &Group, g: &Group, f: &GroupHom, budget: SearchBudget) -> Result<Group> {
    let image = f.image_group();
    if image.is_trivial() {
        return Ok(h.clone());
    }
    let fg = f.image_of_subgroup(g)?;
    let n = normaliser_in(image, &fg, budget)?;
    if n.order() == image.order() {
        return Ok(h.clone());
    }
    f.preimage_with_budget(&n, budget)
}

fn direct(g: &Group, cfg: &ChainConfig, trace: &mut ChainTrace) -> Result<Group> {
    let n = g.degree();
    let r = normaliser_in(&Group::symmetric(n), g, cfg.final_budget)?;
    trace.record("direct", &r, g)?;
    Ok(r)
}

/// Maps each block of `sys` onto `0..k` along a transversal of `G`:
/// point `t_j(b)` of block `j` becomes `j * k + index of b in block 0`.
fn wreath_coordinates(g: &Group, sys: &BlockSystem, first: usize) -> Perm {
    let n = g.degree();
    let k = sys.block_size();
    let blocks = sys.blocks();
    let mut trans: Vec<Option<Perm>> = vec![None; blocks.len()];
    trans[first] = Some(Perm::identity(n));
    let mut queue = vec![first];
    let mut head = 0;
    while head < queue.len() {
        let b = queue[head];
        head += 1;
        for s in g.generators() {
            let c = sys.block_of(s.apply(blocks[b][0]));
            if trans[c].is_none() {
                trans[c] = Some(trans[b].as_ref().unwrap() * s);
                queue.push(c);
            }
        }
    }
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    order.swap(0, first);
    let mut imgs = vec![0usize; n];
    for (j, &b) in order.iter().enumerate() {
        let t = trans[b].as_ref().expect("transitive on blocks");
        for (i, &x) in blocks[first].iter().enumerate() {
            imgs[t.apply(x)] = j * k + i;
        }
    }
    Perm::from_images(imgs).expect("coordinates form a bijection")
}

/// The overgroup `N_{S_k}(pi_B(Stab_G(B))) wr S_l` in the labelling of `sys`.
fn block_wreath(g: &Group, sys: &BlockSystem, cfg: &ChainConfig) -> Result<Group> {
    let b = sys.block_of(0);
    let stab = block_stabilizer(g, sys, b)?;
    let local = block_restriction(&stab, &sys.blocks()[b])?;
    let (inner, _) = symmetric_normaliser(local.image_group(), cfg)?;
    let w = wreath_product(&inner, &Group::symmetric(sys.num_blocks()));
    let rho = wreath_coordinates(g, sys, b);
    Ok(w.conjugate(&rho.inverse()))
}

/// Minimal members of a list of block systems.
fn minimal_systems(systems: &[BlockSystem]) -> Vec<BlockSystem> {
    systems
        .iter()
        .filter(|a| {
            !systems.iter().any(|b| {
                b.block_size() < a.block_size()
                    && b.blocks().iter().all(|blk| blk.iter().all(|&x| a.block_of(x) == a.block_of(blk[0])))
            })
        })
        .cloned()
        .collect()
}

pub fn normaliser_transitive(g: &Group, cfg: &ChainConfig, trace: &mut ChainTrace) -> Result<Group> {
    if !g.is_transitive() {
        return Err(Error::Intransitive);
    }
    let n = g.degree();
    let systems = principal_block_systems(g)?;
    if systems.is_empty() || n <= cfg.cutoff_transitive || g.order() <= BigUint::from(cfg.small_order_factor * n) {
        return direct(g, cfg, trace);
    }
    let mut h = graph_overgroup(g, cfg.step_budget)?;
    trace.record("graph", &h, g)?;

    for sys in principal_block_systems(&h)? {
        let f = block_action(&h, &sys)?;
        step(trace, "block-action", &mut h, g, |h| refine_by_hom(h, g, &f, cfg.step_budget))?;
    }

    for sys in principal_block_systems(&h)? {
        let b = sys.block_of(0);
        let block = &sys.blocks()[b];
        let s = block_stabilizer(&h, &sys, b)?;
        let gs = block_stabilizer(g, &sys, b)?;
        let ps = block_restriction(&s, block)?;
        let pgs = ps.image_of_subgroup(&gs)?;
        if pgs.is_normal_in(ps.image_group()) {
            continue;
        }
        step(trace, "block-wreath", &mut h, g, |h| {
            intersection(h, &block_wreath(g, &sys, cfg)?, cfg.step_budget)
        })?;
    }

    if &h.order() / g.order() > BigUint::from(cfg.large_index) {
        for sys in minimal_systems(&principal_block_systems(&h)?) {
            let b = sys.block_of(0);
            let block = &sys.blocks()[b];
            step(trace, "block-quotient", &mut h, g, |h| {
                let s = block_stabilizer(h, &sys, b)?;
                let pi = block_restriction(&s, block)?;
                let u = pi.image_of_subgroup(&block_stabilizer(g, &sys, b)?)?;
                if u.order() == pi.image_group().order() {
                    return Ok(h.clone());
                }
                let pre = pi.preimage_with_budget(&u, cfg.step_budget)?;
                let f = coset_action(h, &pre)?;
                refine_by_hom(h, g, &f, cfg.step_budget)
            })?;
        }
    }

    let r = normaliser_in(&h, g, cfg.final_budget)?;
    trace.record("final", &r, g)?;
    Ok(r)
}

fn primes_dividing(order: &BigUint, n: usize) -> Vec<u32> {
    (2..=n as u32)
        .filter(|&p| is_prime(p as u64) && (order % p).is_zero())
        .collect()
}

/// Product of the block actions of one minimal block system per orbit.
fn minimal_blocks_hom(h: &Group) -> Result<Option<GroupHom>> {
    let n = h.degree();
    let mut labels: Vec<Vec<usize>> = Vec::new();
    for orb in h.orbits() {
        if orb.len() < 4 {
            continue;
        }
        let f = orbit_action(h, &orb)?;
        let systems = principal_block_systems(f.image_group())?;
        if let Some(sys) = systems.first() {
            for blk in sys.blocks() {
                labels.push(blk.iter().map(|&i| orb[i]).collect());
            }
        }
    }
    if labels.is_empty() {
        return Ok(None);
    }
    let mut block_of = vec![usize::MAX; n];
    for (i, b) in labels.iter().enumerate() {
        for &x in b {
            block_of[x] = i;
        }
    }
    let images = h
        .generators()
        .iter()
        .map(|s| Perm::from_images(labels.iter().map(|b| block_of[s.apply(b[0])]).collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(GroupHom::from_images(h.clone(), labels.len(), images)?))
}

pub fn normaliser_intransitive(g: &Group, cfg: &ChainConfig, trace: &mut ChainTrace) -> Result<Group> {
    if g.is_transitive() {
        return Err(Error::Invalid("group is transitive".into()));
    }
    let n = g.degree();
    if n <= cfg.cutoff_intransitive {
        return direct(g, cfg, trace);
    }
    let decomp = orbit_sort(g, cfg.step_budget)?;
    let gr = decomp.relabelled.clone();
    let mut normalisers = Vec::with_capacity(decomp.factors.len());
    for f in &decomp.factors {
        normalisers.push(symmetric_normaliser(&f.group, cfg)?.0);
    }
    let mut it = normalisers.iter().cloned();
    let mut h = dpwp_overgroup(&decomp, |_| Ok(it.next().expect("one normaliser per factor")))?;
    trace.record("dpwp", &h, &gr)?;

    for p in primes_dividing(&gr.order(), n) {
        let label = format!("code p={p}");
        let seed = cfg.seed ^ p as u64;
        step(trace, &label, &mut h, &gr, |h| code_refine(&gr, h, &decomp, &normalisers, p, cfg.step_budget, seed))?;
    }

    for orb in h.orbits() {
        if orb.len() == n {
            continue;
        }
        let f = orbit_action(&h, &orb)?;
        step(trace, "orbit-action", &mut h, &gr, |h| {
            let f = if f.domain().same_group(h) { f } else { orbit_action(h, &orb)? };
            refine_by_hom(h, &gr, &f, cfg.step_budget)
        })?;
    }

    if let Some(f) = minimal_blocks_hom(&h)? {
        step(trace, "minimal-blocks", &mut h, &gr, |h| refine_by_hom(h, &gr, &f, cfg.step_budget))?;
    }

    let orbits = h.orbits();
    for k in 1..orbits.len() {
        let pts: Vec<usize> = orbits[..k].iter().flatten().copied().collect();
        step(trace, &format!("first-orbits k={k}"), &mut h, &gr, |h| {
            let f = orbit_action(h, &pts)?;
            refine_by_hom(h, &gr, &f, cfg.step_budget)
        })?;
    }

    let r = normaliser_in(&h, &gr, cfg.final_budget)?;
    trace.record("final", &r, &gr)?;
    Ok(r.conjugate(&decomp.relabelling.inverse()))
}

/// `N_{Sym(n)}(G)` through the overgroup chain.
pub fn symmetric_normaliser(g: &Group, cfg: &ChainConfig) -> Result<(Group, ChainTrace)> {
    let n = g.degree();
    let mut trace = ChainTrace::default();
    let order = g.order();
    let full = factorial(n);
    let result = if n <= 1 || order.is_one() || order == full || (n >= 2 && order == &full / 2u32) {
        let s = Group::symmetric(n);
        trace.record("special", &s, g)?;
        s
    } else if g.is_transitive() {
        normaliser_transitive(g, cfg, &mut trace)?
    } else {
        normaliser_intransitive(g, cfg, &mut trace)?
    };
    if let Some(x) = result.generators().iter().find(|x| !g.is_normalised_by(x)) {
        return Err(Error::ChainViolation(format!("result generator {x} does not normalise G")));
    }
    if !g.is_subgroup_of(&result) {
        return Err(Error::ChainViolation("result misses G".into()));
    }
    trace.final_order = Some(result.order());
    Ok((result, trace))
}

/// How a normaliser is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// The overgroup chain.
    Chain,
    /// Backtrack search in the full symmetric group.
    Backtrack,
    /// Exhaustive test of every permutation; small degrees only.
    Oracle,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        match s {
            "chain" => Ok(Method::Chain),
            "backtrack" => Ok(Method::Backtrack),
            "oracle" => Ok(Method::Oracle),
            _ => Err(Error::Parse(format!("unknown method {s:?}"))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Chain => "chain",
            Method::Backtrack => "backtrack",
            Method::Oracle => "oracle",
        })
    }
}

/// `N_{Sym(n)}(G)` by the chosen method; the trace only for the chain.
pub fn normalise(g: &Group, method: Method, cfg: &ChainConfig) -> Result<(Group, Option<ChainTrace>)> {
    match method {
        Method::Chain => symmetric_normaliser(g, cfg).map(|(n, t)| (n, Some(t))),
        Method::Backtrack => Ok((normaliser_in(&Group::symmetric(g.degree()), g, cfg.final_budget)?, None)),
        Method::Oracle => Ok((crate::search::oracle_normaliser(g)?, None)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::oracle_normaliser;
    use crate::testutil::grp;

    fn chain(g: &Group) -> (Group, ChainTrace) {
        symmetric_normaliser(g, &ChainConfig::full_chain()).unwrap()
    }

    #[test]
    fn transitive_examples() {
        for (g, o) in [
            (grp(4, &["(1,2,3,4)"]), 8u64),
            (Group::alternating(5), 120),
            (grp(4, &["(1,2)(3,4)", "(1,3)(2,4)"]), 24),
            (grp(6, &["(1,2,3,4,5,6)"]), 12),
            (grp(8, &["(1,2,3,4,5,6,7,8)"]), 32),
        ] {
            let (n, trace) = chain(&g);
            assert_eq!(n.small_order(), Some(o));
            assert!(n.same_group(&oracle_normaliser(&g).unwrap()));
            assert!(trace.steps.windows(2).all(|w| w[0].order >= w[1].order));
        }
    }

    #[test]
    fn intransitive_examples() {
        for (g, o) in [
            (grp(4, &["(1,2)", "(3,4)"]), 8u64),
            (grp(6, &["(1,2,3)(4,5,6)"]), 36),
            (grp(6, &["(1,2,3)", "(4,5,6)"]), 72),
            (grp(5, &["(1,2)", "(3,4,5)"]), 12),
            (grp(7, &["(2,3)(4,5)", "(6,7)(4,5)"]), 0),
        ] {
            let (n, trace) = chain(&g);
            if o > 0 {
                assert_eq!(n.small_order(), Some(o));
            }
            assert!(n.same_group(&oracle_normaliser(&g).unwrap()), "{g:?}");
            assert_eq!(trace.steps.first().unwrap().label, "dpwp");
        }
    }

    #[test]
    fn special_cases() {
        for g in [Group::symmetric(6), Group::alternating(6), Group::trivial(5)] {
            let (n, trace) = chain(&g);
            assert!(n.same_group(&Group::symmetric(g.degree())));
            assert_eq!(trace.steps.len(), 1);
        }
        let (n, _) = chain(&Group::trivial(1));
        assert_eq!(n.degree(), 1);
    }

    #[test]
    fn hom_refinement() {
        let b = SearchBudget::default();
        let h = wreath_product(&Group::symmetric(3), &Group::symmetric(2));
        let g = grp(6, &["(1,2,3)(4,5,6)"]);
        let sys = BlockSystem::new(6, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        // the block action of the diagonal group is trivial: nothing to gain
        let f = block_action(&h, &sys).unwrap();
        assert_eq!(refine_by_hom(&h, &g, &f, b).unwrap().small_order(), Some(72));
        let f = orbit_action(&h, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(refine_by_hom(&h, &g, &f, b).unwrap().small_order(), Some(36));
        let triv = GroupHom::from_images(h.clone(), 1, vec![Perm::identity(1); h.generators().len()]).unwrap();
        assert!(refine_by_hom(&h, &g, &triv, b).unwrap().same_group(&h));
    }

    #[test]
    fn default_config_agrees() {
        let g = grp(6, &["(1,2,3)(4,5,6)"]);
        let (a, _) = symmetric_normaliser(&g, &ChainConfig::default()).unwrap();
        let (b, _) = chain(&g);
        assert!(a.same_group(&b));
    }

    #[test]
    fn coordinates_for_wreath() {
        let g = grp(6, &["(1,2,3,4,5,6)"]);
        let sys = BlockSystem::new(6, vec![vec![0, 2, 4], vec![1, 3, 5]]).unwrap();
        let w = block_wreath(&g, &sys, &ChainConfig::full_chain()).unwrap();
        assert!(g.is_subgroup_of(&w));
        assert!(oracle_normaliser(&g).unwrap().is_subgroup_of(&w));
    }
}
