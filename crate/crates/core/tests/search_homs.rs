mod common;

use common::{all_perms, elements, grp, random_group, random_perm, small_corpus};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symnorm::actions::{block_action, coset_action, direct_product, orbit_action, wreath_product, GroupHom};
use symnorm::blocks::{minimal_block_system, principal_block_systems};
use symnorm::search::{conjugating_element, intersection, normaliser_in, oracle_normaliser, SearchBudget};
use symnorm::Group;

fn budget() -> SearchBudget {
    SearchBudget::default()
}

#[test]
fn normaliser_in_symmetric_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, u) in small_corpus(7, 6, &mut rng) {
        let n = normaliser_in(&Group::symmetric(u.degree()), &u, budget()).unwrap();
        assert!(n.same_group(&oracle_normaliser(&u).unwrap()), "{name}");
    }
}

#[test]
fn normaliser_in_subgroups_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..30 {
        let d = rng.gen_range(3..=7);
        let g = random_group(d, 2, &mut rng);
        let u = Group::new(d, vec![g.random_element(&mut rng)]).unwrap();
        let n = normaliser_in(&g, &u, budget()).unwrap();
        assert!(u.is_normal_in(&n) && n.is_subgroup_of(&g));
        let els = elements(&u);
        let mut outside = 0;
        for _ in 0..200 {
            let x = g.random_element(&mut rng);
            if n.contains(&x) {
                continue;
            }
            outside += 1;
            assert!(u.generators().iter().any(|a| !els.contains(&a.conjugate_by(&x))));
            if outside == 50 {
                break;
            }
        }
        // brute force count inside G
        let brute = elements(&g)
            .iter()
            .filter(|s| u.generators().iter().all(|a| els.contains(&a.conjugate_by(s))))
            .count();
        assert_eq!(n.order(), BigUint::from(brute));
    }
}

#[test]
fn intersections_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..40 {
        let d = rng.gen_range(2..=7);
        let (a, b) = (random_group(d, 2, &mut rng), random_group(d, 1, &mut rng));
        let i = intersection(&a, &b, budget()).unwrap();
        assert!(i.is_subgroup_of(&a) && i.is_subgroup_of(&b));
        let (ea, eb) = (elements(&a), elements(&b));
        assert_eq!(i.order(), BigUint::from(ea.intersection(&eb).count()));
    }
}

#[test]
fn conjugating_elements_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..40 {
        let d = rng.gen_range(3..=6);
        let a = random_group(d, 1, &mut rng);
        let b = if rng.gen_bool(0.5) {
            a.conjugate(&random_perm(d, &mut rng))
        } else {
            random_group(d, 1, &mut rng)
        };
        let eb = elements(&b);
        match conjugating_element(&a, &b, budget()).unwrap() {
            Some(s) => assert!(a.conjugate(&s).same_group(&b)),
            None => {
                let witness = all_perms(d).into_iter().any(|s| {
                    a.order() == b.order() && a.generators().iter().all(|x| eb.contains(&x.conjugate_by(&s)))
                });
                assert!(!witness);
            }
        }
    }
}

/// Homs to exercise: orbit actions, block actions and coset actions.
fn sample_homs(rng: &mut ChaCha8Rng) -> Vec<GroupHom> {
    let mut out = Vec::new();
    let s4 = Group::symmetric(4);
    out.push(coset_action(&s4, &grp(4, &["(1,2,3,4)"])).unwrap());
    out.push(coset_action(&s4, &grp(4, &["(1,2)(3,4)", "(1,3)(2,4)"])).unwrap());
    let w = wreath_product(&Group::symmetric(2), &Group::symmetric(3));
    let sys = minimal_block_system(&w, 0, 1).unwrap();
    out.push(block_action(&w, &sys).unwrap());
    for _ in 0..6 {
        let d = rng.gen_range(4..=7);
        let g = random_group(d, 2, rng);
        let orb = g.orbits().into_iter().max_by_key(|o| o.len()).unwrap();
        out.push(orbit_action(&g, &orb).unwrap());
        if g.is_transitive() {
            if let Some(s) = principal_block_systems(&g).unwrap().first() {
                out.push(block_action(&g, s).unwrap());
            }
        }
    }
    out
}

#[test]
fn hom_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for f in sample_homs(&mut rng) {
        let g = f.domain().clone();
        for _ in 0..20 {
            let (a, b) = (g.random_element(&mut rng), g.random_element(&mut rng));
            assert_eq!(f.eval(&(&a * &b)).unwrap(), &f.eval(&a).unwrap() * &f.eval(&b).unwrap());
        }
        assert_eq!(g.order(), f.kernel().order() * f.image_group().order());
        // image of a preimage is V ∩ image; preimage of an image contains the subgroup
        let u = Group::new(g.degree(), vec![g.random_element(&mut rng)]).unwrap();
        let back = f.preimage_of_subgroup(&f.image_of_subgroup(&u).unwrap()).unwrap();
        assert!(u.is_subgroup_of(&back));
        let m = f.codomain_degree();
        let v = random_group(m, 1, &mut rng);
        let img = f.image_of_subgroup(&f.preimage_of_subgroup(&v).unwrap()).unwrap();
        let expect = intersection(&v, f.image_group(), budget()).unwrap();
        assert!(img.same_group(&expect));
    }
}

#[test]
fn coset_action_is_transitive_with_exact_stabiliser() {
    let cases = [
        (Group::symmetric(4), grp(4, &["(1,2,3,4)"])),
        (Group::symmetric(5), grp(5, &["(1,2,3,4,5)", "(2,5)(3,4)"])),
        (Group::alternating(5), grp(5, &["(1,2,3)"])),
        (grp(6, &["(1,2,3,4,5,6)", "(1,2)"]), grp(6, &["(1,2)(3,4)"])),
    ];
    for (g, h) in cases {
        let f = coset_action(&g, &h).unwrap();
        let img = f.image_group();
        assert!(img.is_transitive());
        let index = g.order() / h.order();
        assert_eq!(BigUint::from(img.degree()), index);
        let stab = img.point_stabilizer(0);
        assert!(f.preimage_of_subgroup(&stab).unwrap().same_group(&h));
    }
}

#[test]
fn wreath_contains_direct_power() {
    for (h, t) in [
        (Group::symmetric(3), Group::symmetric(2)),
        (grp(4, &["(1,2,3,4)"]), grp(3, &["(1,2,3)"])),
        (grp(2, &["(1,2)"]), Group::symmetric(4)),
    ] {
        let l = t.degree();
        let w = wreath_product(&h, &t);
        let (d, _) = direct_product(&vec![h.clone(); l]).unwrap();
        assert!(d.is_subgroup_of(&w));
        assert_eq!(w.order(), h.order().pow(l as u32) * t.order());
    }
}
