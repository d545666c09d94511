//! Linear codes over prime fields attached to elementary abelian
//! subdirect products, their monomial automorphism groups, and the
//! code-based refinement of normaliser overgroups.

use log::debug;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::actions::{coset_action, coset_action_capped, induced_eval, orbit_action, wreath_product, GroupHom};
use crate::error::{Error, Result};
use crate::group::{cycle, factorial, transposition, Group};
use crate::intransitive::SubdirectDecomposition;
use crate::perm::Perm;
use crate::search::{
    all_subgroups, intersection, normaliser_in, subgroup_search, Meter, Predicate, SearchBudget,
    SUBGROUP_ENUMERATION_CAP,
};

/// Largest code, in words, whose automorphism group is computed.
pub const CODE_WORD_CAP: u64 = 1_000_000;

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut r, mut b, mut e) = (1u64, a as u64 % p as u64, p as u64 - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Reduced row echelon form mod `p`, zero rows dropped.
fn rref(mut rows: Vec<Vec<u32>>, p: u32) -> Vec<Vec<u32>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let f = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * f % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let m = rows[i][c];
                for j in 0..cols {
                    rows[i][j] = (rows[i][j] + (p - m) * rows[r][j]) % p;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// A linear subspace of `(Z/pZ)^k`, stored by a row-reduced basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    p: u32,
    len: usize,
    rows: Vec<Vec<u32>>,
}

impl LinearCode {
    pub fn new(p: u32, len: usize, vectors: &[Vec<u32>]) -> Result<LinearCode> {
        if !is_prime(p as u64) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        for v in vectors {
            if v.len() != len || v.iter().any(|&x| x >= p) {
                return Err(Error::Invalid(format!("bad code vector {v:?}")));
            }
        }
        let rows = if len == 0 { Vec::new() } else { rref(vectors.to_vec(), p) };
        Ok(LinearCode { p, len, rows })
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn length(&self) -> usize {
        self.len
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn word_count(&self) -> BigUint {
        num_traits::pow(BigUint::from(self.p), self.dimension())
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        if v.len() != self.len {
            return false;
        }
        let p = self.p;
        let mut v = v.to_vec();
        for row in &self.rows {
            let c = row.iter().position(|&x| x != 0).expect("non-zero row");
            let m = v[c];
            if m != 0 {
                for j in 0..self.len {
                    v[j] = (v[j] + (p - m) * row[j]) % p;
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    /// Every codeword; fails beyond [`CODE_WORD_CAP`].
    pub fn words(&self) -> Result<Vec<Vec<u32>>> {
        let count = self.word_count().to_u64().filter(|&c| c <= CODE_WORD_CAP).ok_or(Error::OrderCap(CODE_WORD_CAP))?;
        let p = self.p;
        let mut out = Vec::with_capacity(count as usize);
        let mut coef = vec![0u32; self.dimension()];
        loop {
            let mut w = vec![0u32; self.len];
            for (c, row) in coef.iter().zip(&self.rows) {
                for j in 0..self.len {
                    w[j] = (w[j] + c * row[j]) % p;
                }
            }
            out.push(w);
            let mut i = 0;
            while i < coef.len() {
                coef[i] += 1;
                if coef[i] < p {
                    break;
                }
                coef[i] = 0;
                i += 1;
            }
            if i == coef.len() {
                return Ok(out);
            }
        }
    }
}

/// Coordinate permutation with non-zero scalars: `y[perm(i)] = scalars[i] * x[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMap {
    pub perm: Perm,
    pub scalars: Vec<u32>,
}

impl MonomialMap {
    pub fn apply(&self, v: &[u32], p: u32) -> Vec<u32> {
        let mut y = vec![0; v.len()];
        for (i, &x) in v.iter().enumerate() {
            y[self.perm.apply(i)] = self.scalars[i] * x % p;
        }
        y
    }

    /// Reads a permutation of the signed coordinates `(i, a)`, numbered
    /// `i * (p - 1) + a - 1`.
    pub fn from_signed(m: &Perm, k: usize, p: u32) -> MonomialMap {
        let q = p as usize - 1;
        let mut imgs = Vec::with_capacity(k);
        let mut scalars = Vec::with_capacity(k);
        for i in 0..k {
            let t = m.apply(i * q);
            imgs.push(t / q);
            scalars.push((t % q) as u32 + 1);
        }
        MonomialMap {
            perm: Perm::from_images(imgs).expect("monomial permutation"),
            scalars,
        }
    }

    pub fn to_signed(&self, p: u32) -> Perm {
        let q = p as usize - 1;
        let k = self.scalars.len();
        let imgs = (0..k * q)
            .map(|x| {
                let (i, a) = (x / q, (x % q) as u32 + 1);
                self.perm.apply(i) * q + (self.scalars[i] * a % p) as usize - 1
            })
            .collect();
        Perm::from_images(imgs).expect("monomial permutation")
    }

    pub fn preserves(&self, code: &LinearCode) -> bool {
        code.basis().iter().all(|r| code.contains(&self.apply(r, code.prime())))
    }
}

fn primitive_root(p: u32) -> u32 {
    (1..p)
        .find(|&g| {
            let mut x = 1u32;
            (1..p - 1).all(|_| {
                x = x * g % p;
                x != 1
            })
        })
        .unwrap_or(1)
}

/// `F_p^* wr S_k` acting on the `k (p - 1)` signed coordinates.
pub fn monomial_group(k: usize, p: u32) -> Group {
    let q = p as usize - 1;
    let g = primitive_root(p);
    let imgs: Vec<usize> = (0..q).map(|a| (g as usize * (a + 1) % p as usize) - 1).collect();
    let mult = Group::new(q, vec![Perm::from_images(imgs).expect("unit group")]).expect("unit group");
    wreath_product(&mult, &Group::symmetric(k))
}

struct CodePredicate<'a> {
    code: &'a LinearCode,
    q: usize,
    signature: Vec<u64>,
}

impl CodePredicate<'_> {
    fn column(&self, i: usize, s: u32) -> Vec<u32> {
        let p = self.code.p;
        self.code.rows.iter().map(|r| r[i] * s % p).collect()
    }
}

fn transpose(cols: &[Vec<u32>], rows: usize) -> Vec<Vec<u32>> {
    (0..rows).map(|r| cols.iter().map(|c| c[r]).collect()).collect()
}

impl Predicate for CodePredicate<'_> {
    fn partial(&self, base: &[usize], images: &[usize]) -> bool {
        let l = images.len();
        let (i, j) = (base[l - 1] / self.q, images[l - 1] / self.q);
        if self.signature[i] != self.signature[j] {
            return false;
        }
        let mut src = Vec::with_capacity(l);
        let mut dst = Vec::with_capacity(l);
        for t in 0..l {
            let (i, j) = (base[t] / self.q, images[t] / self.q);
            let s = (images[t] % self.q) as u32 + 1;
            src.push(self.column(i, s));
            dst.push(self.column(j, 1));
        }
        let d = self.code.dimension();
        rref(transpose(&src, d), self.code.p) == rref(transpose(&dst, d), self.code.p)
    }

    fn full(&self, g: &Perm) -> bool {
        MonomialMap::from_signed(g, self.code.len, self.code.p).preserves(self.code)
    }
}

/// Per coordinate: weight histogram of the codewords split by whether
/// they vanish at that coordinate. Invariant under monomial maps.
fn coordinate_signatures(code: &LinearCode) -> Result<Vec<u64>> {
    let k = code.len;
    let mut hist = vec![vec![0u64; 2 * (k + 1)]; k];
    for w in code.words()? {
        let wt = w.iter().filter(|&&x| x != 0).count();
        for (i, &x) in w.iter().enumerate() {
            hist[i][2 * wt + usize::from(x != 0)] += 1;
        }
    }
    Ok(hist
        .iter()
        .map(|h| {
            h.iter().fold(0xcbf2_9ce4_8422_2325u64, |acc, &c| (acc ^ c).wrapping_mul(0x100_0000_01b3))
        })
        .collect())
}

/// Monomial automorphism group of `code` as a permutation group on the
/// signed coordinates (degree `k` when `p = 2`).
pub fn code_automorphisms(code: &LinearCode, budget: SearchBudget) -> Result<Group> {
    let k = code.len;
    let p = code.p;
    let q = p as usize - 1;
    let mon = monomial_group(k, p);
    if k == 0 {
        return Ok(mon);
    }
    let signature = coordinate_signatures(code)?;
    let prefix: Vec<usize> = (0..k).map(|i| i * q).collect();
    let chain = mon.chain_with(&prefix, None);
    let pred = CodePredicate { code, q, signature };
    let known: Vec<Perm> = if p > 2 {
        let g = primitive_root(p);
        vec![MonomialMap {
            perm: Perm::identity(k),
            scalars: vec![g; k],
        }
        .to_signed(p)]
    } else {
        Vec::new()
    };
    let mut meter = Meter::new(budget);
    let gens = subgroup_search(&chain, &pred, &known, &mut meter)?;
    Ok(Group::from_parts(k * q, gens, None))
}

/// An elementary abelian group whose non-trivial orbits all have prime
/// length `p`, in coordinates: orbit `i` is `{c_i^a(m_i)}` where `m_i` is
/// its least point and `c_i` the orbit cycle sending `m_i` to the
/// second-least point.
#[derive(Clone, Debug)]
pub struct ElementaryStructure {
    pub p: u32,
    pub degree: usize,
    /// `points[i][a] = c_i^a(m_i)`
    pub points: Vec<Vec<usize>>,
    pub fixed: Vec<usize>,
    pub code: LinearCode,
}

impl ElementaryStructure {
    pub fn orientation(&self, i: usize) -> Perm {
        cycle(self.degree, &self.points[i])
    }

    /// Permutation of the domain induced by a monomial map of the code.
    pub fn lift(&self, m: &MonomialMap) -> Perm {
        let p = self.p as usize;
        let mut imgs: Vec<usize> = (0..self.degree).collect();
        for (i, pts) in self.points.iter().enumerate() {
            let (j, s) = (m.perm.apply(i), m.scalars[i] as usize);
            for (a, &x) in pts.iter().enumerate() {
                imgs[x] = self.points[j][s * a % p];
            }
        }
        Perm::from_images(imgs).expect("lifted monomial map")
    }
}

fn elementary_structure(u: &Group, allow_fixed: bool) -> Result<ElementaryStructure> {
    let n = u.degree();
    let orbits = u.orbits();
    let mut p = 0usize;
    let mut points = Vec::new();
    let mut fixed = Vec::new();
    for orb in &orbits {
        if orb.len() == 1 {
            if !allow_fixed {
                return Err(Error::Invalid(format!("fixed point {}", orb[0] + 1)));
            }
            fixed.push(orb[0]);
            continue;
        }
        if p == 0 {
            p = orb.len();
            if !is_prime(p as u64) {
                return Err(Error::Invalid(format!("orbit length {p} is not prime")));
            }
        }
        if orb.len() != p {
            return Err(Error::Invalid(format!("orbit lengths {p} and {} differ", orb.len())));
        }
        let r = u
            .generators()
            .iter()
            .find(|g| g.apply(orb[0]) != orb[0])
            .expect("orbit moved by a generator");
        let (m, second) = (orb[0], orb[1]);
        let mut steps = 0;
        let mut x = m;
        while x != second {
            x = r.apply(x);
            steps += 1;
        }
        let mut pts = vec![m];
        for _ in 1..p {
            let last = *pts.last().unwrap();
            pts.push((0..steps).fold(last, |y, _| r.apply(y)));
        }
        let mut sorted = pts.clone();
        sorted.sort_unstable();
        if &sorted != orb {
            return Err(Error::Invalid("orbit image is not cyclic of prime order".into()));
        }
        points.push(pts);
    }
    if p == 0 {
        return Err(Error::Invalid("group has no orbit of prime length".into()));
    }
    let mut vectors = Vec::new();
    for g in u.generators() {
        let mut v = Vec::with_capacity(points.len());
        for pts in &points {
            let a = pts.iter().position(|&x| x == g.apply(pts[0])).expect("orbit point");
            if pts.iter().enumerate().any(|(b, &x)| g.apply(x) != pts[(a + b) % p]) {
                return Err(Error::Invalid("orbit image is not cyclic of prime order".into()));
            }
            v.push(a as u32);
        }
        vectors.push(v);
    }
    let code = LinearCode::new(p as u32, points.len(), &vectors)?;
    Ok(ElementaryStructure {
        p: p as u32,
        degree: n,
        points,
        fixed,
        code,
    })
}

/// The code of exponent vectors of `U` with respect to its orbit cycles.
pub fn code_of_elementary_subdirect(u: &Group) -> Result<ElementaryStructure> {
    elementary_structure(u, false)
}

/// `N_{Sym(n)}(U) = C_p^k : Aut(C)`, times the symmetric group on the
/// fixed points when those are allowed.
pub fn elementary_abelian_normaliser(u: &Group, budget: SearchBudget) -> Result<Group> {
    elementary_normaliser_with(&elementary_structure(u, false)?, budget)
}

fn elementary_normaliser_with(st: &ElementaryStructure, budget: SearchBudget) -> Result<Group> {
    let aut = code_automorphisms(&st.code, budget)?;
    let k = st.points.len();
    let mut gens: Vec<Perm> = (0..k).map(|i| st.orientation(i)).collect();
    for g in aut.generators() {
        gens.push(st.lift(&MonomialMap::from_signed(g, k, st.p)));
    }
    let f = &st.fixed;
    if f.len() >= 2 {
        gens.push(transposition(st.degree, f[0], f[1]));
        gens.push(cycle(st.degree, f));
    }
    let order = num_traits::pow(BigUint::from(st.p), k) * aut.order() * factorial(f.len());
    Ok(Group::from_parts(st.degree, gens, Some(order)))
}

/// Normal Sylow `p`-subgroup of a group whose non-trivial orbits have
/// length `p` and affine images: the kernel of the linear-part map.
pub fn affine_sylow(g: &Group, p: u32) -> Result<Group> {
    if p == 2 {
        return Ok(g.clone());
    }
    let q = p as usize - 1;
    let mut lambdas: Vec<Vec<usize>> = vec![Vec::new(); g.generators().len()];
    for orb in g.orbits().iter().filter(|o| o.len() > 1) {
        if orb.len() != p as usize {
            return Err(Error::Invalid(format!("orbit of length {} in a {p}-affine group", orb.len())));
        }
        let f = orbit_action(g, orb)?;
        let c = f
            .image_group()
            .elements()
            .into_iter()
            .find(|x| x.order() == p as u64)
            .ok_or_else(|| Error::Invalid("orbit image has no element of order p".into()))?;
        for (gi, r) in f.generator_images().iter().enumerate() {
            let conj = c.conjugate_by(r);
            let lam = (1..p as u64)
                .find(|&l| c.pow(l) == conj)
                .ok_or_else(|| Error::Invalid("orbit image is not affine".into()))?;
            lambdas[gi].push(lam as usize);
        }
    }
    let r = lambdas.first().map_or(0, Vec::len);
    let images = lambdas
        .iter()
        .map(|ls| {
            let mut imgs = Vec::with_capacity(r * q);
            for (o, &l) in ls.iter().enumerate() {
                imgs.extend((0..q).map(|a| o * q + (l * (a + 1) % p as usize) - 1));
            }
            Perm::from_images(imgs)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GroupHom::from_images(g.clone(), r * q, images)?.kernel())
}

fn is_affine_image(img: &Group, p: u64) -> bool {
    let Some(o) = img.small_order() else { return false };
    o % p == 0 && (p * (p - 1)) % o == 0 && img.elements().iter().filter(|x| x.order() == p).count() as u64 == p - 1
}

/// Subgroups `V` of index `p` whose coset image is a transitive subgroup
/// of `AGL(1, p)`.
pub fn index_p_affine_subgroups(u: &Group, p: u32, cap: u64) -> Result<Vec<Group>> {
    let order = u.order();
    let pp = BigUint::from(p);
    if (&order % &pp) != BigUint::from(0u32) {
        return Ok(Vec::new());
    }
    let target = &order / &pp;
    let d2 = u.derived_subgroup().derived_subgroup();
    let quotient = &order / d2.order();
    let candidates: Vec<Group> = if quotient < order && quotient <= BigUint::from(cap) {
        let f = coset_action(u, &d2)?;
        let mut out = Vec::new();
        for s in all_subgroups(f.image_group(), cap)? {
            if s.order() * &pp == quotient {
                out.push(f.preimage_of_subgroup(&s)?);
            }
        }
        out
    } else {
        all_subgroups(u, cap)?
            .into_iter()
            .filter(|s| s.order() == target)
            .collect()
    };
    let mut out = Vec::new();
    for v in candidates {
        let f = coset_action(u, &v)?;
        if is_affine_image(f.image_group(), p as u64) {
            out.push(v);
        }
    }
    Ok(out)
}

/// For each `N`-class of index-`p` affine subgroups `R` of `U`, a subgroup
/// `H` of `N` with `H ∩ U = R`. Returns the pairs `(R, H)`.
pub fn aff_qu_search(u: &Group, n: &Group, p: u32, budget: SearchBudget) -> Result<Vec<(Group, Group)>> {
    if !u.is_normal_in(n) {
        return Err(Error::Invalid("U must be normal in N".into()));
    }
    let vs = index_p_affine_subgroups(u, p, SUBGROUP_ENUMERATION_CAP)?;
    // N-conjugacy classes
    let mut class: Vec<usize> = (0..vs.len()).collect();
    fn root(c: &mut [usize], mut x: usize) -> usize {
        while c[x] != x {
            x = c[x];
        }
        x
    }
    for i in 0..vs.len() {
        for s in n.generators() {
            let conj = vs[i].conjugate(s);
            if let Some(j) = vs.iter().position(|v| v.same_group(&conj)) {
                let (a, b) = (root(&mut class, i), root(&mut class, j));
                if a != b {
                    class[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut out = Vec::new();
    for i in 0..vs.len() {
        if root(&mut class, i) != i {
            continue;
        }
        let r = &vs[i];
        match complement_overgroup(u, n, r, budget) {
            Ok(Some(h)) => out.push((r.clone(), h)),
            Ok(None) => debug!("affine class {i} dropped: no subgroup meets U in R"),
            Err(e) => debug!("affine class {i} dropped: {e}"),
        }
    }
    Ok(out)
}

fn complement_overgroup(u: &Group, n: &Group, r: &Group, budget: SearchBudget) -> Result<Option<Group>> {
    let nr = normaliser_in(n, r, budget)?;
    let h = if !r.is_normal_in(u) {
        nr
    } else {
        let f = coset_action_capped(&nr, r, SUBGROUP_ENUMERATION_CAP as usize)?;
        let ur = f.image_of_subgroup(u)?;
        let ur_elems: std::collections::HashSet<Perm> = ur.elements().into_iter().collect();
        let mut best: Option<Group> = None;
        for y in all_subgroups(f.image_group(), SUBGROUP_ENUMERATION_CAP)? {
            if best.as_ref().is_some_and(|b| b.order() >= y.order()) {
                continue;
            }
            if y.elements().iter().filter(|x| ur_elems.contains(x)).count() == 1 {
                best = Some(y);
            }
        }
        match best {
            Some(y) => f.preimage_of_subgroup(&y)?,
            None => return Ok(None),
        }
    };
    Ok(intersection(&h, u, budget)?.same_group(r).then_some(h))
}

/// One induced coset representation `N_i wr S_{e_i} -> Sym(m e_i)` of a
/// factor of the decomposition.
#[derive(Clone, Debug)]
pub struct FactorMap {
    pub factor: usize,
    pub coset: GroupHom,
}

fn factor_region(decomp: &SubdirectDecomposition, factor: usize) -> (usize, usize) {
    let f = &decomp.factors[factor];
    (f.offset, f.degree() * f.multiplicity)
}

fn eval_maps(decomp: &SubdirectDecomposition, maps: &[FactorMap], h: &Perm) -> Result<Perm> {
    let mut imgs: Vec<u32> = Vec::new();
    for fm in maps {
        let (off, len) = factor_region(decomp, fm.factor);
        let pts: Vec<usize> = (off..off + len).collect();
        let mut index_of = vec![usize::MAX; h.degree()];
        for (i, &x) in pts.iter().enumerate() {
            index_of[x] = i;
        }
        let local = h.restrict(&pts, &index_of);
        let e = decomp.factors[fm.factor].multiplicity;
        let x = induced_eval(&fm.coset, e, &local)?;
        let shift = imgs.len() as u32;
        imgs.extend(x.raw().iter().map(|&y| y + shift));
    }
    Ok(Perm::from_images_unchecked(imgs))
}

fn maps_hom(decomp: &SubdirectDecomposition, maps: &[FactorMap], domain: &Group) -> Result<GroupHom> {
    let images = domain
        .generators()
        .iter()
        .map(|h| eval_maps(decomp, maps, h))
        .collect::<Result<Vec<_>>>()?;
    let m = maps
        .iter()
        .map(|fm| fm.coset.codomain_degree() * decomp.factors[fm.factor].multiplicity)
        .sum();
    GroupHom::from_images(domain.clone(), m, images)
}

/// The induced coset maps of every affine class of every factor.
pub fn affine_factor_maps(
    decomp: &SubdirectDecomposition,
    normalisers: &[Group],
    p: u32,
    budget: SearchBudget,
) -> Result<Vec<FactorMap>> {
    let mut maps = Vec::new();
    for (i, (f, n)) in decomp.factors.iter().zip(normalisers).enumerate() {
        if !f.group.is_normal_in(n) {
            continue;
        }
        let pairs = match aff_qu_search(&f.group, n, p, budget) {
            Ok(v) => v,
            Err(e) if e.is_budget() => return Err(e),
            Err(e) => {
                debug!("factor {i} skipped: {e}");
                continue;
            }
        };
        for (_, h) in pairs {
            maps.push(FactorMap {
                factor: i,
                coset: coset_action(n, &h)?,
            });
        }
    }
    Ok(maps)
}

/// Refines the overgroup `h` of `N(U)` (inside the direct product of
/// wreath products of `decomp`) through the codes of the Sylow
/// `p`-subgroups of the induced affine images of `U`.
pub fn code_refine(
    u: &Group,
    h: &Group,
    decomp: &SubdirectDecomposition,
    normalisers: &[Group],
    p: u32,
    budget: SearchBudget,
    seed: u64,
) -> Result<Group> {
    let maps = affine_factor_maps(decomp, normalisers, p, budget)?;
    if maps.is_empty() {
        return Ok(h.clone());
    }
    let phi = maps_hom(decomp, &maps, h)?;
    let pu = phi.image_of_subgroup(u)?;
    let sylow = affine_sylow(&pu, p)?;
    if sylow.order() <= BigUint::from(CODE_WORD_CAP) {
        let s = elementary_normaliser_with(&elementary_structure(&sylow, true)?, budget)?;
        return phi.preimage_with_budget(&s, budget);
    }
    // one factor at a time, shrinking U by the kernel of a random subset
    // of the other factors when the code is still too large
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = h.clone();
    for (idx, fm) in maps.iter().enumerate() {
        let single = maps_hom(decomp, std::slice::from_ref(fm), &current)?;
        let mut sub = u.clone();
        let mut img_sylow = affine_sylow(&single.image_of_subgroup(&sub)?, p)?;
        if img_sylow.order() > BigUint::from(CODE_WORD_CAP) {
            let others: Vec<FactorMap> = maps
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != idx && rng.gen_bool(0.5))
                .map(|(_, m)| m.clone())
                .collect();
            if others.is_empty() {
                continue;
            }
            let psi = maps_hom(decomp, &others, &current)?.restrict(&sub)?;
            sub = psi.kernel();
            img_sylow = affine_sylow(&single.image_of_subgroup(&sub)?, p)?;
            if img_sylow.order() > BigUint::from(CODE_WORD_CAP) {
                debug!("code factor {idx} skipped: code too large");
                continue;
            }
        }
        if img_sylow.is_trivial() {
            continue;
        }
        let s = elementary_normaliser_with(&elementary_structure(&img_sylow, true)?, budget)?;
        current = single.preimage_with_budget(&s, budget)?;
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intransitive::{dpwp_overgroup, orbit_sort};
    use crate::search::oracle_normaliser;
    use crate::testutil::{all_perms, grp};

    fn b() -> SearchBudget {
        SearchBudget::default()
    }

    fn brute_aut_order(code: &LinearCode) -> usize {
        let k = code.length();
        let p = code.prime();
        let mut count = 0;
        for perm in all_perms(k) {
            let mut scalars = vec![1u32; k];
            loop {
                let m = MonomialMap {
                    perm: perm.clone(),
                    scalars: scalars.clone(),
                };
                if m.preserves(code) {
                    count += 1;
                }
                let mut i = 0;
                while i < k {
                    scalars[i] += 1;
                    if scalars[i] < p {
                        break;
                    }
                    scalars[i] = 1;
                    i += 1;
                }
                if i == k {
                    break;
                }
            }
        }
        count
    }

    #[test]
    fn codes_basics() {
        let c = LinearCode::new(3, 3, &[vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 2]]).unwrap();
        assert_eq!(c.dimension(), 2);
        assert_eq!(c.basis(), &[vec![1, 2, 0], vec![0, 0, 1]]);
        assert!(c.contains(&[2, 1, 1]));
        assert!(!c.contains(&[1, 1, 0]));
        assert_eq!(c.words().unwrap().len(), 9);
        assert!(LinearCode::new(4, 1, &[]).is_err());
        assert!(LinearCode::new(2, 2, &[vec![2, 0]]).is_err());
    }

    #[test]
    fn monomial_maps() {
        let m = MonomialMap {
            perm: Perm::from_cycles("(1,2)", 2).unwrap(),
            scalars: vec![2, 1],
        };
        assert_eq!(m.apply(&[1, 1], 3), vec![1, 2]);
        assert_eq!(MonomialMap::from_signed(&m.to_signed(3), 2, 3), m);
        assert_eq!(monomial_group(3, 3).small_order(), Some(48));
        assert_eq!(monomial_group(4, 2).small_order(), Some(24));
    }

    #[test]
    fn automorphism_examples() {
        let rep2 = LinearCode::new(2, 2, &[vec![1, 1]]).unwrap();
        assert_eq!(code_automorphisms(&rep2, b()).unwrap().small_order(), Some(2));
        let rep3 = LinearCode::new(2, 3, &[vec![1, 1, 1]]).unwrap();
        assert_eq!(code_automorphisms(&rep3, b()).unwrap().small_order(), Some(6));
        let c = LinearCode::new(3, 2, &[vec![1, 1]]).unwrap();
        let a = code_automorphisms(&c, b()).unwrap();
        assert_eq!(a.small_order(), Some(4));
        assert_eq!(brute_aut_order(&c), 4);
    }

    #[test]
    fn automorphisms_against_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let p = if rng.gen_bool(0.5) { 2 } else { 3 };
            let k = rng.gen_range(1..=5);
            let rows: Vec<Vec<u32>> = (0..rng.gen_range(0..=k))
                .map(|_| (0..k).map(|_| rng.gen_range(0..p)).collect())
                .collect();
            let c = LinearCode::new(p, k, &rows).unwrap();
            let a = code_automorphisms(&c, b()).unwrap();
            for g in a.generators() {
                assert!(MonomialMap::from_signed(g, k, p).preserves(&c));
            }
            assert_eq!(a.small_order().unwrap() as usize, brute_aut_order(&c), "{c:?}");
        }
    }

    #[test]
    fn codes_of_groups() {
        let st = code_of_elementary_subdirect(&grp(4, &["(1,2)(3,4)"])).unwrap();
        assert_eq!(st.code.basis(), &[vec![1, 1]]);
        let st = code_of_elementary_subdirect(&grp(6, &["(1,2)(3,4)", "(5,6)"])).unwrap();
        assert_eq!(st.code.basis(), &[vec![1, 1, 0], vec![0, 0, 1]]);
        let st = code_of_elementary_subdirect(&grp(6, &["(1,2,3)(4,5,6)"])).unwrap();
        assert_eq!((st.p, st.code.basis().to_vec()), (3, vec![vec![1, 1]]));
        let st = code_of_elementary_subdirect(&grp(6, &["(1,3,2)(4,5,6)"])).unwrap();
        assert_eq!(st.code.basis(), &[vec![1, 2]]);
        assert!(code_of_elementary_subdirect(&grp(4, &["(1,2,3,4)"])).is_err());
        assert!(code_of_elementary_subdirect(&grp(3, &["(1,2)"])).is_err());
    }

    #[test]
    fn elementary_normalisers() {
        for (g, expect) in [
            (grp(4, &["(1,2)(3,4)"]), 8),
            (grp(6, &["(1,2)(3,4)", "(5,6)"]), 16),
            (grp(6, &["(1,2,3)(4,5,6)"]), 36),
            (grp(6, &["(1,2,3)(4,6,5)"]), 36),
            (grp(8, &["(1,2)(3,4)(5,6)", "(3,4)(7,8)"]), 0),
        ] {
            let n = elementary_abelian_normaliser(&g, b()).unwrap();
            let oracle = oracle_normaliser(&g).unwrap();
            assert!(n.same_group(&oracle));
            assert_eq!(n.order(), n.chain().order());
            if expect > 0 {
                assert_eq!(n.small_order(), Some(expect));
            }
        }
    }

    #[test]
    fn affine_subgroups() {
        let c4 = grp(4, &["(1,2,3,4)"]);
        let v = index_p_affine_subgroups(&c4, 2, 2000).unwrap();
        assert_eq!(v.len(), 1);
        assert!(v[0].same_group(&grp(4, &["(1,3)(2,4)"])));
        let klein = grp(4, &["(1,2)(3,4)", "(1,3)(2,4)"]);
        assert_eq!(index_p_affine_subgroups(&klein, 2, 2000).unwrap().len(), 3);
        let c3 = grp(3, &["(1,2,3)"]);
        let v = index_p_affine_subgroups(&c3, 3, 2000).unwrap();
        assert_eq!(v.len(), 1);
        assert!(v[0].is_trivial());
        assert!(index_p_affine_subgroups(&c3, 2, 2000).unwrap().is_empty());
        // S_4: A_4 of index 2, and the three dihedral subgroups of index 3
        // whose coset image is S_3 = AGL(1, 3)
        let s4 = Group::symmetric(4);
        assert_eq!(index_p_affine_subgroups(&s4, 2, 2000).unwrap().len(), 1);
        let v = index_p_affine_subgroups(&s4, 3, 2000).unwrap();
        assert_eq!(v.len(), 3);
        assert!(v.iter().all(|d| d.small_order() == Some(8)));
        assert!(index_p_affine_subgroups(&Group::alternating(5), 5, 2000).unwrap().is_empty());
    }

    #[test]
    fn affine_search() {
        let c4 = grp(4, &["(1,2,3,4)"]);
        let d4 = grp(4, &["(1,2,3,4)", "(1,3)"]);
        let res = aff_qu_search(&c4, &d4, 2, b()).unwrap();
        assert_eq!(res.len(), 1);
        let (r, h) = &res[0];
        assert!(r.same_group(&grp(4, &["(1,3)(2,4)"])));
        assert_eq!(h.small_order(), Some(4));
        assert!(intersection(h, &c4, b()).unwrap().same_group(r));

        let u = grp(4, &["(1,2)(3,4)"]);
        let n = grp(4, &["(1,2)", "(3,4)"]);
        let res = aff_qu_search(&u, &n, 2, b()).unwrap();
        assert_eq!(res.len(), 1);
        assert!(res[0].0.is_trivial());
        assert!(intersection(&res[0].1, &u, b()).unwrap().is_trivial());
        assert_eq!(res[0].1.small_order(), Some(2));

        assert!(aff_qu_search(&grp(3, &["(1,2,3)"]), &Group::symmetric(3), 2, b()).unwrap().is_empty());
        // Klein four in S_4: one class of the three order-2 subgroups
        let klein = grp(4, &["(1,2)(3,4)", "(1,3)(2,4)"]);
        let res = aff_qu_search(&klein, &Group::symmetric(4), 2, b()).unwrap();
        assert_eq!(res.len(), 1);
        assert_eq!(coset_action(&Group::symmetric(4), &res[0].1).unwrap().codomain_degree(), 6);
    }

    #[test]
    fn sylow_of_affine_groups() {
        let agl = grp(5, &["(1,2,3,4,5)", "(2,3,5,4)"]);
        let s = affine_sylow(&agl, 5).unwrap();
        assert_eq!(s.small_order(), Some(5));
        let g = grp(6, &["(1,2,3)(4,5,6)", "(2,3)(5,6)"]);
        let s = affine_sylow(&g, 3).unwrap();
        assert!(s.same_group(&grp(6, &["(1,2,3)(4,5,6)"])));
    }

    fn refine_case(g: &Group, p: u32) -> (Group, Group) {
        let d = orbit_sort(g, b()).unwrap();
        let ns: Vec<Group> = d.factors.iter().map(|f| oracle_normaliser(&f.group).unwrap()).collect();
        let mut it = ns.iter().cloned();
        let w = dpwp_overgroup(&d, |_| Ok(it.next().unwrap())).unwrap();
        let r = code_refine(&d.relabelled, &w, &d, &ns, p, b(), 1).unwrap();
        assert!(d.relabelled.is_subgroup_of(&r));
        assert!(r.is_subgroup_of(&w));
        assert!(oracle_normaliser(&d.relabelled).unwrap().is_subgroup_of(&r));
        (w, r)
    }

    #[test]
    fn refinements() {
        let (w, r) = refine_case(&grp(6, &["(1,2,3)(4,5,6)"]), 3);
        assert_eq!((w.small_order(), r.small_order()), (Some(72), Some(36)));
        let (_, r) = refine_case(&grp(6, &["(1,2)(3,4)", "(5,6)"]), 2);
        assert_eq!(r.small_order(), Some(16));
        let (_, r) = refine_case(&grp(6, &["(1,2)", "(3,4)", "(5,6)"]), 2);
        assert_eq!(r.small_order(), Some(48));
        // Klein factors pass through the degree-6 coset representation
        let (_, r) = refine_case(&grp(8, &["(1,2)(3,4)(5,6)(7,8)", "(1,3)(2,4)(5,7)(6,8)", "(1,2)(3,4)"]), 2);
        assert!(r.order() <= BigUint::from(1152u32));
        let (w, r) = refine_case(&grp(5, &["(1,2)", "(3,4,5)"]), 3);
        assert!(r.same_group(&w));
    }
}
