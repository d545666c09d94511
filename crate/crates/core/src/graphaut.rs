//! Automorphism groups of vertex-coloured graphs, and the normaliser
//! overgroup obtained from the graph of block systems.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::One;

use crate::actions::{block_action, orbit_action};
use crate::blocks::{block_stabilizer, principal_block_systems, BlockSystem};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::perm::Perm;
use crate::search::{Meter, SearchBudget};

/// Above this many vertices, point 0 is individualised before the search.
pub const POINT_STABILISER_THRESHOLD: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    adj: Vec<Vec<usize>>,
    colors: Vec<usize>,
    edges: usize,
}

impl ColoredGraph {
    /// Colours are renumbered to be contiguous, preserving their order.
    pub fn new(vertices: usize, edges: &[(usize, usize)], colors: &[usize]) -> Result<ColoredGraph> {
        if colors.len() != vertices {
            return Err(Error::Invalid(format!("{} colours for {vertices} vertices", colors.len())));
        }
        let mut adj = vec![Vec::new(); vertices];
        for &(u, v) in edges {
            if u >= vertices || v >= vertices {
                return Err(Error::Invalid(format!("edge ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::Invalid(format!("loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut count = 0;
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
            count += a.len();
        }
        let distinct: BTreeSet<usize> = colors.iter().copied().collect();
        let rank: std::collections::HashMap<usize, usize> = distinct.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        Ok(ColoredGraph {
            adj,
            colors: colors.iter().map(|c| rank[c]).collect(),
            edges: count / 2,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn is_automorphism(&self, g: &Perm) -> bool {
        g.degree() == self.vertex_count()
            && (0..self.vertex_count()).all(|v| {
                self.colors[g.apply(v)] == self.colors[v]
                    && self.adj[v].len() == self.adj[g.apply(v)].len()
                    && self.adj[v].iter().all(|&w| self.has_edge(g.apply(v), g.apply(w)))
            })
    }

    /// DIMACS-style text, vertices 1-based.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p edge {} {}\n", self.vertex_count(), self.edges);
        for (v, c) in self.colors.iter().enumerate() {
            let _ = writeln!(out, "c color {} {}", v + 1, c);
        }
        for (u, nb) in self.adj.iter().enumerate() {
            for &v in nb.iter().filter(|&&v| v > u) {
                let _ = writeln!(out, "e {} {}", u + 1, v + 1);
            }
        }
        out
    }
}

/// Ordered partition: cells are ranges of `lab`, named by their start.
#[derive(Clone)]
struct Partition {
    lab: Vec<usize>,
    pos: Vec<usize>,
    cell: Vec<usize>,
    end: Vec<usize>,
}

impl Partition {
    fn by_colour(g: &ColoredGraph) -> (Partition, BTreeSet<usize>) {
        let n = g.vertex_count();
        let mut lab: Vec<usize> = (0..n).collect();
        lab.sort_by_key(|&v| (g.colors[v], v));
        let mut p = Partition {
            pos: vec![0; n],
            cell: vec![0; n],
            end: vec![0; n],
            lab,
        };
        let mut starts = BTreeSet::new();
        let mut s = 0;
        for i in 0..n {
            if i > 0 && g.colors[p.lab[i]] != g.colors[p.lab[i - 1]] {
                s = i;
            }
            if s == i {
                starts.insert(s);
            }
            p.cell[p.lab[i]] = s;
            p.pos[p.lab[i]] = i;
        }
        for &st in &starts {
            let mut e = st;
            while e < n && p.cell[p.lab[e]] == st {
                e += 1;
            }
            p.end[st] = e;
        }
        (p, starts)
    }

    fn is_discrete(&self) -> bool {
        (0..self.lab.len()).all(|i| self.end[self.cell[self.lab[i]]] == self.cell[self.lab[i]] + 1)
    }

    /// Smallest non-singleton cell, lowest start first.
    fn target_cell(&self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        let mut i = 0;
        while i < self.lab.len() {
            let e = self.end[i];
            let size = e - i;
            if size > 1 && best.map_or(true, |(_, s)| size < s) {
                best = Some((i, size));
            }
            i = e;
        }
        best.map(|(s, _)| s)
    }

    fn individualise(&mut self, v: usize) -> usize {
        let s = self.cell[v];
        let e = self.end[s];
        let (pv, other) = (self.pos[v], self.lab[s]);
        self.lab.swap(s, pv);
        self.pos[other] = pv;
        self.pos[v] = s;
        self.end[s] = s + 1;
        self.end[s + 1] = e;
        for i in s + 1..e {
            self.cell[self.lab[i]] = s + 1;
        }
        s
    }

    /// Refines to the coarsest equitable partition below the current one.
    /// Returns a label-invariant hash of the refinement.
    fn refine(&mut self, g: &ColoredGraph, mut work: BTreeSet<usize>, counts: &mut [usize]) -> u64 {
        let mut h = 0xcbf2_9ce4_8422_2325u64;
        let mix = |h: &mut u64, x: usize| *h = (*h ^ x as u64).wrapping_mul(0x100_0000_01b3);
        while let Some(w) = work.pop_first() {
            let mut touched = Vec::new();
            for i in w..self.end[w] {
                for &y in &g.adj[self.lab[i]] {
                    if counts[y] == 0 {
                        touched.push(y);
                    }
                    counts[y] += 1;
                }
            }
            let cells: BTreeSet<usize> = touched.iter().map(|&y| self.cell[y]).collect();
            for s in cells {
                let e = self.end[s];
                if e - s == 1 {
                    continue;
                }
                let mut seg: Vec<usize> = self.lab[s..e].to_vec();
                seg.sort_by_key(|&v| counts[v]);
                if counts[seg[0]] == counts[seg[e - s - 1]] {
                    continue;
                }
                mix(&mut h, s);
                let mut start = s;
                for (k, &v) in seg.iter().enumerate() {
                    let i = s + k;
                    if k > 0 && counts[v] != counts[seg[k - 1]] {
                        self.end[start] = i;
                        mix(&mut h, i - start);
                        mix(&mut h, counts[seg[k - 1]]);
                        work.insert(start);
                        start = i;
                    }
                    self.lab[i] = v;
                    self.pos[v] = i;
                    self.cell[v] = start;
                }
                self.end[start] = e;
                mix(&mut h, e - start);
                work.insert(start);
            }
            for y in touched {
                counts[y] = 0;
            }
        }
        h
    }
}

struct Engine<'a> {
    graph: &'a ColoredGraph,
    first_hash: Vec<u64>,
    first_leaf: Vec<usize>,
    meter: Meter,
    counts: Vec<usize>,
}

impl Engine<'_> {
    /// Depth-first search below `part` (at depth `depth`) for a leaf that
    /// yields an automorphism against the first leaf.
    fn search(&mut self, part: Partition, depth: usize) -> Result<Option<Perm>> {
        self.meter.tick()?;
        if part.is_discrete() {
            let mut imgs = vec![0usize; part.lab.len()];
            for (i, &v) in self.first_leaf.iter().enumerate() {
                imgs[v] = part.lab[i];
            }
            let g = Perm::from_images(imgs)?;
            return Ok(self.graph.is_automorphism(&g).then_some(g));
        }
        if depth >= self.first_hash.len() {
            return Ok(None);
        }
        let t = part.target_cell().expect("non-discrete partition has a target");
        let cands: Vec<usize> = part.lab[t..part.end[t]].to_vec();
        for u in cands {
            let mut child = part.clone();
            let s = child.individualise(u);
            let h = child.refine(self.graph, BTreeSet::from([s]), &mut self.counts);
            if h != self.first_hash[depth] {
                continue;
            }
            if let Some(g) = self.search(child, depth + 1)? {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }
}

fn orbit_roots(n: usize, gens: &[Perm]) -> Vec<usize> {
    let mut root: Vec<usize> = (0..n).collect();
    fn find(r: &mut [usize], mut x: usize) -> usize {
        while r[x] != x {
            r[x] = r[r[x]];
            x = r[x];
        }
        x
    }
    for g in gens {
        for x in 0..n {
            let (a, b) = (find(&mut root, x), find(&mut root, g.apply(x)));
            if a != b {
                root[a.max(b)] = a.min(b);
            }
        }
    }
    (0..n).map(|x| find(&mut root, x)).collect()
}

/// The group of colour-preserving automorphisms, with its exact order.
pub fn graph_automorphisms(graph: &ColoredGraph, budget: SearchBudget) -> Result<Group> {
    let n = graph.vertex_count();
    let mut counts = vec![0usize; n];
    let (mut part, work) = Partition::by_colour(graph);
    part.refine(graph, work, &mut counts);
    // first path
    let mut nodes = vec![part.clone()];
    let mut first_hash = Vec::new();
    let mut targets = Vec::new();
    while let Some(t) = nodes.last().unwrap().target_cell() {
        let mut child = nodes.last().unwrap().clone();
        let v = child.lab[t];
        let s = child.individualise(v);
        first_hash.push(child.refine(graph, BTreeSet::from([s]), &mut counts));
        targets.push((t, v));
        nodes.push(child);
    }
    let first_leaf = nodes.last().unwrap().lab.clone();
    let mut engine = Engine {
        graph,
        first_hash,
        first_leaf,
        meter: Meter::new(budget),
        counts,
    };
    let mut gens: Vec<Perm> = Vec::new();
    let mut order = BigUint::one();
    for level in (0..targets.len()).rev() {
        let (t, v) = targets[level];
        let node = &nodes[level];
        let cell: Vec<usize> = node.lab[t..node.end[t]].to_vec();
        let mut rejected: Vec<usize> = Vec::new();
        for &w in &cell {
            let roots = orbit_roots(n, &gens);
            if roots[w] == roots[v] || rejected.iter().any(|&r| roots[r] == roots[w]) {
                continue;
            }
            engine.meter.tick()?;
            let mut child = nodes[level].clone();
            let s = child.individualise(w);
            let h = child.refine(graph, BTreeSet::from([s]), &mut engine.counts);
            let found = if h == engine.first_hash[level] { engine.search(child, level + 1)? } else { None };
            match found {
                Some(g) => gens.push(g),
                None => rejected.push(w),
            }
        }
        let roots = orbit_roots(n, &gens);
        order *= cell.iter().filter(|&&x| roots[x] == roots[v]).count();
    }
    Ok(Group::from_parts(n, gens, Some(order)))
}

/// What a vertex of a block system graph stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Vertex {
    Point(usize),
    /// `(system index, block index)`
    Block(usize, usize),
    System(usize),
}

/// Points first, then blocks system by system, then systems. Base colours:
/// points 0, blocks 1, systems `2 + system_colors[i]`.
pub fn block_system_graph_colored(
    degree: usize,
    systems: &[BlockSystem],
    system_colors: &[usize],
) -> Result<(ColoredGraph, Vec<Vertex>)> {
    let mut legend: Vec<Vertex> = (0..degree).map(Vertex::Point).collect();
    let mut colors = vec![0; degree];
    let mut edges = Vec::new();
    for (si, sys) in systems.iter().enumerate() {
        if sys.degree() != degree || sys.is_trivial() {
            return Err(Error::Invalid(format!("system {si} is trivial or of the wrong degree")));
        }
        for (bi, b) in sys.blocks().iter().enumerate() {
            let v = legend.len();
            legend.push(Vertex::Block(si, bi));
            colors.push(1);
            edges.extend(b.iter().map(|&x| (x, v)));
        }
    }
    let mut first_block = degree;
    for (si, sys) in systems.iter().enumerate() {
        let v = legend.len();
        legend.push(Vertex::System(si));
        colors.push(2 + system_colors.get(si).copied().unwrap_or(0));
        edges.extend((first_block..first_block + sys.num_blocks()).map(|b| (b, v)));
        first_block += sys.num_blocks();
    }
    Ok((ColoredGraph::new(legend.len(), &edges, &colors)?, legend))
}

/// The block system graph with the three base colours only.
pub fn block_system_graph(g: &Group, systems: &[BlockSystem]) -> Result<(ColoredGraph, Vec<Vertex>)> {
    if let Some(s) = systems.iter().find(|s| !s.is_invariant(g)) {
        return Err(Error::NotInvariant(format!("block system {:?}", s.blocks())));
    }
    block_system_graph_colored(g.degree(), systems, &[])
}

/// Colour classes for systems: the invariant `(k, |phi_B(G)|, |pi_B(Stab_G(B))|)`.
pub fn system_invariants(g: &Group, systems: &[BlockSystem]) -> Result<Vec<(usize, BigUint, BigUint)>> {
    systems
        .iter()
        .map(|sys| {
            let img = block_action(g, sys)?.image_group().order();
            let b = sys.block_of(0);
            let stab = block_stabilizer(g, sys, b)?;
            let local = orbit_action(&stab, &sys.blocks()[b])?.image_group().order();
            Ok((sys.num_blocks(), img, local))
        })
        .collect()
}

/// An overgroup of `N_{Sym(n)}(G)` acting on the points of the block
/// system graph of `G`.
pub fn graph_overgroup(g: &Group, budget: SearchBudget) -> Result<Group> {
    let systems = principal_block_systems(g)?;
    if systems.is_empty() {
        return Err(Error::Primitive);
    }
    let inv = system_invariants(g, &systems)?;
    let mut distinct = inv.clone();
    distinct.sort();
    distinct.dedup();
    let colors: Vec<usize> = inv.iter().map(|t| distinct.binary_search(t).unwrap()).collect();
    let n = g.degree();
    let (mut graph, _) = block_system_graph_colored(n, &systems, &colors)?;
    let pin = graph.vertex_count() > POINT_STABILISER_THRESHOLD;
    if pin {
        let mut cols = graph.colors.clone();
        cols[0] = distinct.len() + 2;
        graph.colors = cols;
    }
    let aut = graph_automorphisms(&graph, budget)?;
    let mut gens = Vec::with_capacity(aut.generators().len());
    for a in aut.generators() {
        let imgs: Vec<usize> = (0..n).map(|x| a.apply(x)).collect();
        if imgs.iter().any(|&y| y >= n) {
            return Err(Error::ChainViolation("graph automorphism moves a point vertex off the points".into()));
        }
        gens.push(Perm::from_images(imgs)?);
    }
    if pin {
        gens.extend(g.generators().iter().cloned());
        Ok(Group::from_parts(n, gens, None))
    } else {
        let order = aut.order();
        let restricted = Group::from_parts(n, gens, Some(order));
        Ok(restricted)
    }
}
