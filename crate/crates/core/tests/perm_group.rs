mod common;

use common::{closure, elements, random_group, random_perm};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symnorm::{Group, Perm};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative(n in 1usize..12, seed: u64) {
        let mut r = rng(seed);
        let (a, b, c) = (random_perm(n, &mut r), random_perm(n, &mut r), random_perm(n, &mut r));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert!((&a * &a.inverse()).is_identity());
        // left-to-right: (a*b)(x) = b(a(x))
        for x in 0..n {
            prop_assert_eq!((&a * &b).apply(x), b.apply(a.apply(x)));
        }
    }

    #[test]
    fn order_and_membership_match_closure(n in 2usize..=8, k in 1usize..=3, seed: u64) {
        let mut r = rng(seed);
        let g = random_group(n, k, &mut r);
        let els = closure(n, g.generators());
        prop_assert_eq!(g.order(), BigUint::from(els.len()));
        for _ in 0..100 {
            let x = random_perm(n, &mut r);
            prop_assert_eq!(g.contains(&x), els.contains(&x));
        }
    }

    #[test]
    fn orbits_partition_the_domain(n in 1usize..=12, k in 1usize..=3, seed: u64) {
        let mut r = rng(seed);
        let g = random_group(n, k, &mut r);
        let orbits = g.orbits();
        let mut seen = vec![false; n];
        for o in &orbits {
            for &x in o {
                prop_assert!(!seen[x]);
                seen[x] = true;
                for s in g.generators() {
                    prop_assert!(o.contains(&s.apply(x)));
                }
            }
        }
        prop_assert!(seen.into_iter().all(|b| b));
    }

    #[test]
    fn conjugation_round_trips(n in 2usize..=8, seed: u64) {
        let mut r = rng(seed);
        let g = random_group(n, 2, &mut r);
        let s = random_perm(n, &mut r);
        let h = g.conjugate(&s);
        prop_assert_eq!(h.order(), g.order());
        let back = h.conjugate(&s.inverse());
        prop_assert!(back.same_group(&g));
        prop_assert_eq!(elements(&back), elements(&g));
    }
}

#[test]
fn text_round_trip_is_one_based() {
    let g = Group::parse("degree 5\n# comment\n(1,2,3)\n( 4 , 5 )\n").unwrap();
    assert_eq!(g.degree(), 5);
    assert_eq!(g.generators()[0].apply(0), 1);
    let again = Group::parse(&g.to_text()).unwrap();
    assert!(again.same_group(&g));
    assert!(Group::parse("degree 3\n(1,4)\n").is_err());
    assert!(Group::parse("(1,2)\n").is_err());
    assert_eq!(Perm::from_cycles("(1,2)(2,3)", 3).is_err(), true);
}
