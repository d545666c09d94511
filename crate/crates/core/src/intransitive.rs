//! Orbit sorting of intransitive groups and the direct product of wreath
//! products that contains their normaliser.

use num_bigint::BigUint;

use crate::actions::{direct_product, orbit_action, wreath_product};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::perm::Perm;
use crate::search::{conjugating_element, SearchBudget};

/// A class of mutually permutation-isomorphic orbit images.
#[derive(Clone, Debug)]
pub struct Factor {
    /// Orbit image on `0..d`, shared exactly by every orbit of the class
    /// after relabelling.
    pub group: Group,
    pub multiplicity: usize,
    pub offset: usize,
}

impl Factor {
    pub fn degree(&self) -> usize {
        self.group.degree()
    }

    /// Points of the `i`-th orbit of this class in the relabelled domain.
    pub fn orbit(&self, i: usize) -> std::ops::Range<usize> {
        let d = self.degree();
        self.offset + i * d..self.offset + (i + 1) * d
    }
}

#[derive(Clone, Debug)]
pub struct SubdirectDecomposition {
    /// Point `x` of the input is renamed `relabelling(x)`.
    pub relabelling: Perm,
    pub factors: Vec<Factor>,
    /// `G.conjugate(relabelling)`.
    pub relabelled: Group,
}

impl SubdirectDecomposition {
    pub fn orbit_count(&self) -> usize {
        self.factors.iter().map(|f| f.multiplicity).sum()
    }

    /// All orbits of the relabelled group, in block order.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        self.factors
            .iter()
            .flat_map(|f| (0..f.multiplicity).map(move |i| f.orbit(i).collect()))
            .collect()
    }
}

fn stabiliser_orbit_count(g: &Group) -> usize {
    if g.degree() == 0 {
        return 0;
    }
    g.point_stabilizer(0).orbits().len()
}

/// A domain bijection `s` with `a.conjugate(s) == b`, if one exists.
pub fn permutation_isomorphic(a: &Group, b: &Group, budget: SearchBudget) -> Result<Option<Perm>> {
    if a.degree() != b.degree() || a.order() != b.order() {
        return Ok(None);
    }
    if a.is_transitive() && b.is_transitive() && stabiliser_orbit_count(a) != stabiliser_orbit_count(b) {
        return Ok(None);
    }
    conjugating_element(a, b, budget)
}

/// Relabels `G` so that its orbits are consecutive intervals, grouped by
/// permutation-isomorphism class and aligned so that orbits of one class
/// carry identical images under the shift maps. Classes are ordered by
/// degree, then order, then first appearance.
pub fn orbit_sort(g: &Group, budget: SearchBudget) -> Result<SubdirectDecomposition> {
    let n = g.degree();
    let orbits = g.orbits();
    // (representative image, order, members as (orbit index, local relabelling))
    let mut classes: Vec<(Group, BigUint, Vec<(usize, Perm)>)> = Vec::new();
    for (i, orb) in orbits.iter().enumerate() {
        let img = orbit_action(g, orb)?.image_group().clone();
        let order = img.order();
        let mut placed = false;
        for (rep, rep_order, members) in classes.iter_mut() {
            if rep.degree() != img.degree() || *rep_order != order {
                continue;
            }
            if let Some(s) = permutation_isomorphic(rep, &img, budget)? {
                members.push((i, s.inverse()));
                placed = true;
                break;
            }
        }
        if !placed {
            let d = img.degree();
            classes.push((img, order, vec![(i, Perm::identity(d))]));
        }
    }
    // stable sort keeps first-seen order among ties
    classes.sort_by(|a, b| (a.0.degree(), &a.1).cmp(&(b.0.degree(), &b.1)));
    let mut images = vec![0usize; n];
    let mut factors = Vec::with_capacity(classes.len());
    let mut offset = 0;
    for (rep, _, members) in classes {
        let d = rep.degree();
        factors.push(Factor {
            group: rep,
            multiplicity: members.len(),
            offset,
        });
        for (oi, t) in members {
            for (local, &x) in orbits[oi].iter().enumerate() {
                images[x] = offset + t.apply(local);
            }
            offset += d;
        }
    }
    let relabelling = Perm::from_images(images)?;
    let relabelled = g.conjugate(&relabelling);
    Ok(SubdirectDecomposition {
        relabelling,
        factors,
        relabelled,
    })
}

/// `prod_j N_{S_{d_j}}(G_j) wr S_{e_j}` in the relabelled domain, with the
/// factor normalisers supplied by `normaliser`.
pub fn dpwp_overgroup<F>(decomp: &SubdirectDecomposition, mut normaliser: F) -> Result<Group>
where
    F: FnMut(&Group) -> Result<Group>,
{
    if decomp.factors.is_empty() {
        return Err(Error::Invalid("empty decomposition".into()));
    }
    let mut parts = Vec::with_capacity(decomp.factors.len());
    for f in &decomp.factors {
        let n = normaliser(&f.group)?;
        parts.push(wreath_product(&n, &Group::symmetric(f.multiplicity)));
    }
    Ok(direct_product(&parts)?.0)
}
