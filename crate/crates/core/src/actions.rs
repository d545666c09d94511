//! Homomorphisms given by generator images, and the standard actions and
//! product constructions built on them.
//!
//! A hom `f: G -> Sym(m)` is evaluated through the stabilizer chain of its
//! graph `{(g, f(g))}`, a permutation group of degree `n + m`. Sifting
//! `(g, 1)` through the levels based on domain points leaves `(1, f(g)^-1)`,
//! so no words in the generators are needed. A second chain of the graph,
//! based first on a base of the image, yields the kernel and lifts.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::blocks::BlockSystem;
use crate::chain::{BuildOptions, StabChain};
use crate::error::{Error, Result};
use crate::group::{factorial, Group};
use crate::perm::Perm;
use crate::search::{self, SearchBudget};

/// Default cap on the index of a coset action.
pub const COSET_INDEX_CAP: usize = 100_000;

#[derive(Clone)]
pub struct GroupHom {
    domain: Group,
    codomain_degree: usize,
    images: Vec<Perm>,
    eval_chain: Arc<OnceLock<StabChain>>,
    lift_chain: Arc<OnceLock<(StabChain, usize)>>,
    image: Arc<OnceLock<Group>>,
}

impl std::fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupHom")
            .field("domain", &self.domain)
            .field("codomain_degree", &self.codomain_degree)
            .field("images", &self.images)
            .finish()
    }
}

impl GroupHom {
    /// `images[i]` is the image of `domain.generators()[i]`. The caller
    /// asserts this defines a homomorphism; [`GroupHom::verify`] checks it.
    pub fn from_images(domain: Group, codomain_degree: usize, images: Vec<Perm>) -> Result<GroupHom> {
        if images.len() != domain.generators().len() {
            return Err(Error::Invalid(format!(
                "{} generator images for {} generators",
                images.len(),
                domain.generators().len()
            )));
        }
        if let Some(x) = images.iter().find(|x| x.degree() != codomain_degree) {
            return Err(Error::DegreeMismatch(codomain_degree, x.degree()));
        }
        Ok(GroupHom {
            domain,
            codomain_degree,
            images,
            eval_chain: Arc::new(OnceLock::new()),
            lift_chain: Arc::new(OnceLock::new()),
            image: Arc::new(OnceLock::new()),
        })
    }

    /// Hom defined by a formula valid on the whole domain.
    pub fn from_fn<F: Fn(&Perm) -> Perm>(domain: Group, codomain_degree: usize, f: F) -> GroupHom {
        let images = domain.generators().iter().map(f).collect();
        GroupHom::from_images(domain, codomain_degree, images).expect("formula images have the codomain degree")
    }

    pub fn domain(&self) -> &Group {
        &self.domain
    }

    pub fn codomain_degree(&self) -> usize {
        self.codomain_degree
    }

    pub fn generator_images(&self) -> &[Perm] {
        &self.images
    }

    fn graph_gens(&self) -> Vec<Perm> {
        self.domain
            .generators()
            .iter()
            .zip(&self.images)
            .map(|(g, x)| graph_element(g, x))
            .collect()
    }

    fn eval_chain(&self) -> &StabChain {
        self.eval_chain.get_or_init(|| {
            let order = self.domain.order();
            let base = self.domain.chain().base();
            StabChain::build(
                self.domain.degree() + self.codomain_degree,
                &self.graph_gens(),
                BuildOptions {
                    strict_prefix: &base,
                    priority: None,
                    order_hint: Some(&order),
                },
            )
        })
    }

    fn lift_chain(&self) -> &(StabChain, usize) {
        self.lift_chain.get_or_init(|| {
            let n = self.domain.degree();
            let order = self.domain.order();
            let prefix: Vec<usize> = self.image_group().chain().base().iter().map(|&b| b + n).collect();
            let domain_base = self.domain.chain().base();
            let chain = StabChain::build(
                n + self.codomain_degree,
                &self.graph_gens(),
                BuildOptions {
                    strict_prefix: &prefix,
                    priority: Some(&domain_base),
                    order_hint: Some(&order),
                },
            );
            (chain, prefix.len())
        })
    }

    /// Checks that the generator images define a homomorphism.
    pub fn verify(&self) -> bool {
        let n = self.domain.degree();
        let chain = StabChain::build(n + self.codomain_degree, &self.graph_gens(), BuildOptions::default());
        chain.order() == self.domain.order()
    }

    /// Image of an arbitrary element of the domain.
    pub fn eval(&self, g: &Perm) -> Result<Perm> {
        let n = self.domain.degree();
        if g.degree() != n {
            return Err(Error::DegreeMismatch(n, g.degree()));
        }
        if self.domain.is_trivial() {
            return if g.is_identity() {
                Ok(Perm::identity(self.codomain_degree))
            } else {
                Err(Error::NotSubgroup("element outside the hom domain".into()))
            };
        }
        let lifted = graph_element(g, &Perm::identity(self.codomain_degree));
        let (r, _) = self.eval_chain().sift_from(&lifted, 0);
        if (0..n).any(|x| r.apply(x) != x) {
            return Err(Error::NotSubgroup("element outside the hom domain".into()));
        }
        Ok(codomain_part(&r, n, self.codomain_degree).inverse())
    }

    pub fn image_group(&self) -> &Group {
        self.image.get_or_init(|| Group::from_parts(self.codomain_degree, self.images.clone(), None))
    }

    pub fn kernel(&self) -> Group {
        let n = self.domain.degree();
        if self.domain.is_trivial() {
            return Group::trivial(n);
        }
        let (chain, prefix) = self.lift_chain();
        let gens = chain
            .stabilizer_gens(*prefix)
            .iter()
            .map(|g| domain_part(g, n))
            .collect();
        let order = if *prefix < chain.levels().len() { chain.order_from(*prefix) } else { BigUint::one() };
        Group::from_parts(n, gens, Some(order))
    }

    /// Some preimage of `v`, which must lie in the image.
    pub fn lift(&self, v: &Perm) -> Result<Perm> {
        let n = self.domain.degree();
        if v.degree() != self.codomain_degree {
            return Err(Error::DegreeMismatch(self.codomain_degree, v.degree()));
        }
        if self.domain.is_trivial() {
            return if v.is_identity() {
                Ok(Perm::identity(n))
            } else {
                Err(Error::NotSubgroup("element outside the hom image".into()))
            };
        }
        let (chain, prefix) = self.lift_chain();
        let mut g = graph_element(&Perm::identity(n), v);
        for lev in &chain.levels()[..*prefix] {
            let b = g.apply(lev.base());
            let inv = lev
                .inv_rep(b)
                .ok_or_else(|| Error::NotSubgroup("element outside the hom image".into()))?;
            g = &g * inv;
        }
        if !codomain_part(&g, n, self.codomain_degree).is_identity() {
            return Err(Error::NotSubgroup("element outside the hom image".into()));
        }
        Ok(domain_part(&g, n).inverse())
    }

    pub fn image_of_subgroup(&self, u: &Group) -> Result<Group> {
        let gens = u.generators().iter().map(|g| self.eval(g)).collect::<Result<Vec<_>>>()?;
        Ok(Group::from_parts(self.codomain_degree, gens, None))
    }

    /// `f^-1(V ∩ f(domain))`.
    pub fn preimage_of_subgroup(&self, v: &Group) -> Result<Group> {
        self.preimage_with_budget(v, SearchBudget::default())
    }

    pub fn preimage_with_budget(&self, v: &Group, budget: SearchBudget) -> Result<Group> {
        if v.degree() != self.codomain_degree {
            return Err(Error::DegreeMismatch(self.codomain_degree, v.degree()));
        }
        let image = self.image_group();
        let w = if v.is_subgroup_of(image) {
            v.clone()
        } else {
            search::intersection(v, image, budget)?
        };
        let kernel = self.kernel();
        let mut gens = kernel.generators().to_vec();
        for x in w.generators() {
            gens.push(self.lift(x)?);
        }
        let order = kernel.order() * w.order();
        Ok(Group::from_parts(self.domain.degree(), gens, Some(order)))
    }

    /// The same map restricted to a subgroup of the domain.
    pub fn restrict(&self, sub: &Group) -> Result<GroupHom> {
        let images = sub.generators().iter().map(|g| self.eval(g)).collect::<Result<Vec<_>>>()?;
        GroupHom::from_images(sub.clone(), self.codomain_degree, images)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }
}

fn graph_element(g: &Perm, x: &Perm) -> Perm {
    let n = g.degree();
    let mut imgs: Vec<u32> = g.raw().to_vec();
    imgs.extend(x.raw().iter().map(|&y| y + n as u32));
    Perm::from_images_unchecked(imgs)
}

fn domain_part(g: &Perm, n: usize) -> Perm {
    Perm::from_images_unchecked(g.raw()[..n].to_vec())
}

fn codomain_part(g: &Perm, n: usize, m: usize) -> Perm {
    Perm::from_images_unchecked(g.raw()[n..n + m].iter().map(|&y| y - n as u32).collect())
}

/// Action on an invariant set, relabelled to `0..|delta|` in ascending order.
pub fn orbit_action(g: &Group, delta: &[usize]) -> Result<GroupHom> {
    let mut pts = delta.to_vec();
    pts.sort_unstable();
    pts.dedup();
    let n = g.degree();
    let mut index_of = vec![usize::MAX; n];
    for (i, &x) in pts.iter().enumerate() {
        if x >= n {
            return Err(Error::Invalid(format!("point {x} outside the domain")));
        }
        index_of[x] = i;
    }
    for s in g.generators() {
        if pts.iter().any(|&x| index_of[s.apply(x)] == usize::MAX) {
            return Err(Error::NotInvariant("orbit action on a non-invariant set".into()));
        }
    }
    let images = g.generators().iter().map(|s| s.restrict(&pts, &index_of)).collect();
    GroupHom::from_images(g.clone(), pts.len(), images)
}

/// Action on the blocks of a system, blocks numbered by least element.
pub fn block_action(g: &Group, system: &BlockSystem) -> Result<GroupHom> {
    if system.degree() != g.degree() {
        return Err(Error::DegreeMismatch(g.degree(), system.degree()));
    }
    if !system.is_invariant(g) {
        return Err(Error::NotInvariant("block system".into()));
    }
    let k = system.num_blocks();
    let images = g
        .generators()
        .iter()
        .map(|s| {
            let imgs = (0..k)
                .map(|b| system.block_of(s.apply(system.blocks()[b][0])) as u32)
                .collect();
            Perm::from_images_unchecked(imgs)
        })
        .collect();
    GroupHom::from_images(g.clone(), k, images)
}

/// Canonical element of the right coset `H y`: greedily minimises the
/// images of the base points of `H`.
fn canonical_coset_rep(h_chain: &StabChain, y: &Perm) -> Perm {
    let mut y = y.clone();
    for lev in h_chain.levels() {
        let best = *lev
            .orbit()
            .iter()
            .min_by_key(|&&d| y.apply(d))
            .expect("non-empty orbit");
        if best != lev.base() {
            y = lev.rep(best).expect("orbit point") * &y;
        }
    }
    y
}

/// Action of `G` on the right cosets of `H` by right multiplication.
/// Cosets are numbered breadth-first; point 0 is `H` itself.
pub fn coset_action(g: &Group, h: &Group) -> Result<GroupHom> {
    coset_action_capped(g, h, COSET_INDEX_CAP)
}

pub fn coset_action_capped(g: &Group, h: &Group, cap: usize) -> Result<GroupHom> {
    if !h.is_subgroup_of(g) {
        return Err(Error::NotSubgroup("coset action needs H inside G".into()));
    }
    if let Some(idx) = (g.order() / h.order()).to_usize() {
        if idx > cap {
            return Err(Error::IndexCap(cap));
        }
    } else {
        return Err(Error::IndexCap(cap));
    }
    let h_chain = h.chain();
    let n = g.degree();
    let first = canonical_coset_rep(h_chain, &Perm::identity(n));
    let mut reps = vec![first.clone()];
    let mut index: HashMap<Perm, usize> = HashMap::from([(first, 0)]);
    let gens = g.generators();
    let mut table: Vec<Vec<u32>> = vec![Vec::new(); gens.len()];
    let mut head = 0;
    while head < reps.len() {
        for (si, s) in gens.iter().enumerate() {
            let c = canonical_coset_rep(h_chain, &(&reps[head] * s));
            let next = reps.len();
            let idx = *index.entry(c.clone()).or_insert_with(|| {
                reps.push(c);
                next
            });
            table[si].push(idx as u32);
        }
        head += 1;
    }
    let m = reps.len();
    let images = table.into_iter().map(Perm::from_images_unchecked).collect();
    let hom = GroupHom::from_images(g.clone(), m, images)?;
    Ok(hom)
}

/// Direct product on the disjoint union of the domains; factor `i` is
/// shifted by the sum of the earlier degrees. Returns the offsets too.
pub fn direct_product(groups: &[Group]) -> Result<(Group, Vec<usize>)> {
    if groups.is_empty() {
        return Err(Error::Invalid("empty direct product".into()));
    }
    let total: usize = groups.iter().map(Group::degree).sum();
    let mut offsets = Vec::with_capacity(groups.len());
    let mut gens = Vec::new();
    let mut order = BigUint::one();
    let mut off = 0;
    for g in groups {
        offsets.push(off);
        gens.extend(g.generators().iter().map(|s| s.shifted(off, total)));
        order *= g.order();
        off += g.degree();
    }
    Ok((Group::from_parts(total, gens, Some(order)), offsets))
}

/// `H ≀ T`: blocks `{0..k}, {k..2k}, ..`; `H` acts on the first block and
/// `T` permutes blocks wholesale.
pub fn wreath_product(h: &Group, t: &Group) -> Group {
    let k = h.degree();
    let l = t.degree();
    let total = k * l;
    let mut gens: Vec<Perm> = h.generators().iter().map(|s| s.shifted(0, total)).collect();
    for s in t.generators() {
        let imgs = (0..total)
            .map(|x| (s.apply(x / k) * k + x % k) as u32)
            .collect();
        gens.push(Perm::from_images_unchecked(imgs));
    }
    let order = num_traits::pow(h.order(), l) * t.order();
    Group::from_parts(total, gens, Some(order))
}

/// Splits an element of `Sym(d) ≀ Sym(e)` into its block permutation and
/// the local elements carrying block `b` onto block `pi(b)`.
pub fn wreath_decompose(w: &Perm, d: usize, e: usize) -> Result<(Perm, Vec<Perm>)> {
    if w.degree() != d * e {
        return Err(Error::DegreeMismatch(d * e, w.degree()));
    }
    let mut top = Vec::with_capacity(e);
    let mut locals = Vec::with_capacity(e);
    for b in 0..e {
        let tb = w.apply(b * d) / d;
        let mut imgs = Vec::with_capacity(d);
        for x in 0..d {
            let y = w.apply(b * d + x);
            if y / d != tb {
                return Err(Error::NotSubgroup("element does not preserve the block structure".into()));
            }
            imgs.push(y % d);
        }
        top.push(tb);
        locals.push(Perm::from_images(imgs)?);
    }
    Ok((Perm::from_images(top)?, locals))
}

/// Applies `f` blockwise to an element of `N ≀ Sym(e)`, keeping the block
/// permutation: the image acts on `m * e` points.
pub fn induced_eval(f: &GroupHom, e: usize, w: &Perm) -> Result<Perm> {
    let d = f.domain().degree();
    let m = f.codomain_degree();
    let (top, locals) = wreath_decompose(w, d, e)?;
    let mut imgs = vec![0u32; m * e];
    for (b, local) in locals.iter().enumerate() {
        let fl = f.eval(local)?;
        let tb = top.apply(b);
        for y in 0..m {
            imgs[b * m + y] = (tb * m + fl.apply(y)) as u32;
        }
    }
    Ok(Perm::from_images_unchecked(imgs))
}

/// The induced hom `N ≀ S_e -> S_m ≀ S_e` of `f: N -> S_m`.
pub fn induced_wreath_hom(f: &GroupHom, e: usize) -> Result<GroupHom> {
    let domain = wreath_product(f.domain(), &Group::symmetric(e));
    induced_hom_on(f, e, &domain)
}

/// The induced hom restricted to a subgroup of `N ≀ S_e`.
pub fn induced_hom_on(f: &GroupHom, e: usize, sub: &Group) -> Result<GroupHom> {
    let images = sub
        .generators()
        .iter()
        .map(|w| induced_eval(f, e, w))
        .collect::<Result<Vec<_>>>()?;
    GroupHom::from_images(sub.clone(), f.codomain_degree() * e, images)
}

/// Product of homs on a common domain, into the direct product of codomains.
pub fn hom_product(fs: &[GroupHom]) -> Result<GroupHom> {
    let first = fs.first().ok_or_else(|| Error::Invalid("empty hom product".into()))?;
    let domain = first.domain().clone();
    for f in fs {
        if f.domain().degree() != domain.degree() || f.domain().generators() != domain.generators() {
            return Err(Error::Invalid("hom product needs a common domain".into()));
        }
    }
    let total: usize = fs.iter().map(GroupHom::codomain_degree).sum();
    let images = (0..domain.generators().len())
        .map(|i| {
            let mut imgs = Vec::with_capacity(total);
            let mut off = 0;
            for f in fs {
                imgs.extend(f.generator_images()[i].raw().iter().map(|&y| y + off as u32));
                off += f.codomain_degree();
            }
            Perm::from_images_unchecked(imgs)
        })
        .collect();
    GroupHom::from_images(domain, total, images)
}

/// `f` followed by `g` (`g` must be defined on the image of `f`).
pub fn compose(f: &GroupHom, g: &GroupHom) -> Result<GroupHom> {
    let images = f
        .generator_images()
        .iter()
        .map(|x| g.eval(x))
        .collect::<Result<Vec<_>>>()?;
    GroupHom::from_images(f.domain().clone(), g.codomain_degree(), images)
}

/// `|S_m ≀ S_e|`, handy for order bookkeeping.
pub fn full_wreath_order(m: usize, e: usize) -> BigUint {
    num_traits::pow(factorial(m), e) * factorial(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{brute_closure, grp, p};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn order(g: &Group) -> u64 {
        g.small_order().unwrap()
    }

    fn check_hom(f: &GroupHom, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = f.domain();
        for _ in 0..20 {
            let a = d.random_element(&mut rng);
            let b = d.random_element(&mut rng);
            assert_eq!(f.eval(&(&a * &b)).unwrap(), &f.eval(&a).unwrap() * &f.eval(&b).unwrap());
        }
        assert!(f.eval(&Perm::identity(d.degree())).unwrap().is_identity());
        assert_eq!(d.order(), f.kernel().order() * f.image_group().order());
    }

    #[test]
    fn orbit_actions() {
        let g = grp(5, &["(1,2)", "(3,4,5)"]);
        let f = orbit_action(&g, &[2, 3, 4]).unwrap();
        assert!(f.image_group().same_group(&grp(3, &["(1,2,3)"])));
        check_hom(&f, 1);
        let f = orbit_action(&g, &[0, 1, 2, 3, 4]).unwrap();
        assert!(f.image_group().same_group(&g));
        let f = orbit_action(&grp(4, &["(1,2)(3,4)"]), &[0, 1]).unwrap();
        assert!(f.image_group().same_group(&grp(2, &["(1,2)"])));
        assert_eq!(order(&f.kernel()), 1);
        assert!(orbit_action(&g, &[0, 2]).is_err());
    }

    #[test]
    fn block_actions() {
        let c4 = grp(4, &["(1,2,3,4)"]);
        let sys = BlockSystem::new(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        let f = block_action(&c4, &sys).unwrap();
        assert!(f.image_group().same_group(&grp(2, &["(1,2)"])));
        assert!(f.kernel().same_group(&grp(4, &["(1,3)(2,4)"])));
        check_hom(&f, 2);
        let klein = grp(4, &["(1,2)(3,4)", "(1,3)(2,4)"]);
        let sys = BlockSystem::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(order(block_action(&klein, &sys).unwrap().image_group()), 2);
        let singletons = BlockSystem::new(4, (0..4).map(|x| vec![x]).collect()).unwrap();
        let f = block_action(&c4, &singletons).unwrap();
        assert!(f.image_group().same_group(&c4));
    }

    #[test]
    fn coset_actions() {
        let s4 = Group::symmetric(4);
        let c4 = grp(4, &["(1,2,3,4)"]);
        let f = coset_action(&s4, &c4).unwrap();
        assert_eq!(f.codomain_degree(), 6);
        assert!(f.image_group().is_transitive());
        assert_eq!(order(f.image_group()), 24);
        check_hom(&f, 3);
        let klein = grp(4, &["(1,2)(3,4)", "(1,3)(2,4)"]);
        let mut lens: Vec<usize> = f.image_of_subgroup(&klein).unwrap().orbits().iter().map(Vec::len).collect();
        lens.sort_unstable();
        assert_eq!(lens, vec![2, 2, 2]);
        // stabiliser of the point 0 pulls back to H
        let stab = f.image_group().point_stabilizer(0);
        assert!(f.preimage_of_subgroup(&stab).unwrap().same_group(&c4));
        let f = coset_action(&s4, &s4).unwrap();
        assert_eq!(f.codomain_degree(), 1);
        assert!(coset_action(&c4, &s4).is_err());
        assert!(matches!(coset_action_capped(&s4, &Group::trivial(4), 10), Err(Error::IndexCap(10))));
    }

    #[test]
    fn kernels_and_preimages() {
        let c4 = grp(4, &["(1,2,3,4)"]);
        let sys = BlockSystem::new(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        let f = block_action(&c4, &sys).unwrap();
        assert!(f.preimage_of_subgroup(f.image_group()).unwrap().same_group(&c4));
        let g = grp(5, &["(1,2,3)", "(4,5)"]);
        let f = orbit_action(&g, &[0, 1, 2, 3, 4]).unwrap();
        let u = grp(5, &["(1,2,3)"]);
        assert_eq!(f.image_of_subgroup(&u).unwrap().order(), u.order());
        let v = grp(3, &["(1,2,3)"]);
        let f = orbit_action(&g, &[0, 1, 2]).unwrap();
        let pre = f.preimage_of_subgroup(&v).unwrap();
        assert!(pre.same_group(&g));
        let pre = f.preimage_of_subgroup(&Group::trivial(3)).unwrap();
        assert!(pre.same_group(&grp(5, &["(4,5)"])));
        // V partly outside the image: preimage of V ∩ image
        let v = grp(3, &["(1,2)"]);
        let pre = f.preimage_of_subgroup(&v).unwrap();
        assert!(pre.same_group(&grp(5, &["(4,5)"])));
        let img = f.image_of_subgroup(&pre).unwrap();
        assert_eq!(order(&img), 1);
    }

    #[test]
    fn products() {
        let c3 = grp(3, &["(1,2,3)"]);
        let (g, off) = direct_product(&[c3.clone(), c3.clone()]).unwrap();
        assert_eq!((g.degree(), order(&g)), (6, 9));
        assert_eq!(off, vec![0, 3]);
        let (g, _) = direct_product(&[Group::symmetric(3), Group::symmetric(2)]).unwrap();
        assert_eq!((g.degree(), g.chain().order()), (5, BigUint::from(12u32)));
        let (g, _) = direct_product(std::slice::from_ref(&c3)).unwrap();
        assert!(g.same_group(&c3));
        assert!(direct_product(&[]).is_err());
    }

    #[test]
    fn wreath_products() {
        let w = wreath_product(&Group::symmetric(2), &Group::symmetric(3));
        assert_eq!((w.degree(), w.chain().order()), (6, BigUint::from(48u32)));
        let w = wreath_product(&Group::symmetric(3), &Group::symmetric(2));
        assert_eq!((w.degree(), w.chain().order()), (6, BigUint::from(72u32)));
        let h = grp(3, &["(1,2,3)"]);
        let w = wreath_product(&h, &Group::trivial(1));
        assert!(w.same_group(&h));
        // the base group sits inside
        let (base, _) = direct_product(&[h.clone(), h.clone()]).unwrap();
        assert!(base.is_subgroup_of(&wreath_product(&h, &Group::symmetric(2))));
        let brute = brute_closure(6, wreath_product(&Group::symmetric(2), &Group::symmetric(3)).generators());
        assert_eq!(brute.len(), 48);
    }

    #[test]
    fn induced_homs() {
        let n = grp(3, &["(1,2,3)", "(1,2)"]);
        let id = GroupHom::from_images(n.clone(), 3, n.generators().to_vec()).unwrap();
        let f = induced_wreath_hom(&id, 2).unwrap();
        for (g, x) in f.domain().generators().iter().zip(f.generator_images()) {
            assert_eq!(g, x);
        }
        let one = induced_wreath_hom(&id, 1).unwrap();
        assert!(one.image_group().same_group(&n));

        let s4 = Group::symmetric(4);
        let c4 = grp(4, &["(1,2,3,4)"]);
        let pi6 = coset_action(&s4, &c4).unwrap();
        let big = induced_wreath_hom(&pi6, 2).unwrap();
        assert_eq!(big.codomain_degree(), 12);
        check_hom(&big, 4);
        let k = grp(4, &["(1,2)(3,4)", "(1,3)(2,4)"]);
        let (k2, _) = direct_product(&[k.clone(), k]).unwrap();
        let img = big.image_of_subgroup(&k2).unwrap();
        let lens: Vec<usize> = img.orbits().iter().map(Vec::len).collect();
        assert_eq!(lens, vec![2; 6]);
        assert!(big.verify());
    }

    #[test]
    fn hom_products() {
        let klein = grp(4, &["(1,2)(3,4)", "(1,3)(2,4)"]);
        let a = block_action(&klein, &BlockSystem::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap()).unwrap();
        let b = block_action(&klein, &BlockSystem::new(4, vec![vec![0, 2], vec![1, 3]]).unwrap()).unwrap();
        let prod = hom_product(&[a.clone(), b]).unwrap();
        assert_eq!(order(&prod.kernel()), 1);
        check_hom(&prod, 5);
        let single = hom_product(std::slice::from_ref(&a)).unwrap();
        assert_eq!(single.generator_images(), a.generator_images());
        let g = grp(5, &["(1,2)", "(3,4,5)"]);
        let fs: Vec<GroupHom> = g.orbits().iter().map(|o| orbit_action(&g, o).unwrap()).collect();
        assert!(hom_product(&fs).unwrap().is_injective());
        let _ = p("()", 1);
    }
}
