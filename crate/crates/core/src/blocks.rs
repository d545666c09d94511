//! Block systems of transitive groups.

use crate::actions::{block_action, orbit_action, GroupHom};
use crate::error::{Error, Result};
use crate::group::Group;

/// A partition of `0..degree` into blocks of equal size. Blocks are sorted
/// internally and ordered by least element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockSystem {
    degree: usize,
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl BlockSystem {
    pub fn new(degree: usize, mut blocks: Vec<Vec<usize>>) -> Result<BlockSystem> {
        let mut block_of = vec![usize::MAX; degree];
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.retain(|b| !b.is_empty());
        blocks.sort_unstable();
        let size = blocks.first().map_or(0, Vec::len);
        for (i, b) in blocks.iter().enumerate() {
            if b.len() != size {
                return Err(Error::Invalid("blocks of unequal size".into()));
            }
            for &x in b {
                if x >= degree || block_of[x] != usize::MAX {
                    return Err(Error::Invalid(format!("point {} repeated or out of range", x + 1)));
                }
                block_of[x] = i;
            }
        }
        if block_of.iter().any(|&b| b == usize::MAX) {
            return Err(Error::Invalid("blocks do not cover the domain".into()));
        }
        Ok(BlockSystem { degree, blocks, block_of })
    }

    /// System from a labelling `point -> class id`.
    pub fn from_labels(labels: &[usize]) -> Result<BlockSystem> {
        let mut classes: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for (x, &l) in labels.iter().enumerate() {
            classes.entry(l).or_default().push(x);
        }
        BlockSystem::new(labels.len(), classes.into_values().collect())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn block_size(&self) -> usize {
        self.blocks.first().map_or(0, Vec::len)
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.block_size() <= 1 || self.num_blocks() <= 1
    }

    pub fn is_invariant(&self, g: &Group) -> bool {
        g.generators().iter().all(|s| {
            self.blocks.iter().all(|b| {
                let target = self.block_of[s.apply(b[0])];
                b.iter().all(|&x| self.block_of[s.apply(x)] == target)
            })
        })
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
}

/// Finest `G`-invariant partition in which `a` and `b` share a class.
/// For a transitive group this is the minimal block system containing
/// `{a, b}` in a block.
pub fn minimal_partition(g: &Group, a: usize, b: usize) -> Vec<usize> {
    let n = g.degree();
    let mut uf = UnionFind((0..n).collect());
    let mut queue = Vec::new();
    let (ra, rb) = (uf.find(a), uf.find(b));
    if ra != rb {
        uf.0[rb] = ra;
        queue.push((a, b));
    }
    while let Some((x, y)) = queue.pop() {
        for s in g.generators() {
            let (u, v) = (uf.find(s.apply(x)), uf.find(s.apply(y)));
            if u != v {
                uf.0[v] = u;
                queue.push((u, v));
            }
        }
    }
    (0..n).map(|x| uf.find(x)).collect()
}

pub fn minimal_block_system(g: &Group, a: usize, b: usize) -> Result<BlockSystem> {
    if !g.is_transitive() {
        return Err(Error::Intransitive);
    }
    BlockSystem::from_labels(&minimal_partition(g, a, b))
}

/// The distinct non-trivial minimal systems generated by pairs `{0, j}`,
/// sorted by block size and then by the block of point 0.
pub fn principal_block_systems(g: &Group) -> Result<Vec<BlockSystem>> {
    if !g.is_transitive() {
        return Err(Error::Intransitive);
    }
    let mut out: Vec<BlockSystem> = Vec::new();
    for j in 1..g.degree() {
        let sys = minimal_block_system(g, 0, j)?;
        if sys.num_blocks() > 1 && !out.contains(&sys) {
            out.push(sys);
        }
    }
    out.sort_by(|a, b| (a.block_size(), &a.blocks()[0]).cmp(&(b.block_size(), &b.blocks()[0])));
    Ok(out)
}

pub fn is_primitive(g: &Group) -> Result<bool> {
    Ok(principal_block_systems(g)?.is_empty())
}

/// Setwise stabiliser of block `b`.
pub fn block_stabilizer(g: &Group, system: &BlockSystem, b: usize) -> Result<Group> {
    let f = block_action(g, system)?;
    let stab = f.image_group().point_stabilizer(b);
    f.preimage_of_subgroup(&stab)
}

/// Restriction of `Stab_G(B)` to the block `B`, relabelled to `0..|B|`.
pub fn block_restriction(stab: &Group, block: &[usize]) -> Result<GroupHom> {
    orbit_action(stab, block)
}
