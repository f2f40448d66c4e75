mod common;

use common::boxes::box_points;
use common::*;
use tfr_core::cech::*;
use tfr_core::cohomology::StarContext;
use tfr_core::frobenius::{excluded_primes, monoid_f_injective};
use tfr_core::lattice::is_prime;

#[test]
fn slice_witnesses_and_search_agree() {
    for (name, mc) in all_fixtures() {
        let ctx = StarContext::new(&mc);
        let fan = mc.fan();
        for a in box_points(mc.ambient_dim(), 3) {
            let slice = cech_slice(&mc, &ctx.cells, &a);
            for t in 1..slice.complex.maps.len() {
                assert!(slice.complex.maps[t].mul(&slice.complex.maps[t - 1]).is_zero());
            }
            for p in slice.pieces.iter().flatten() {
                let w = &p.witness;
                assert_eq!(&(&w.z - &w.y), &a, "{name}");
                assert!(fan.faces_of(w.refuge).contains(&p.cone));
                assert!(mc.monoid(w.refuge).contains(&w.z) && mc.monoid(p.cone).contains(&w.y), "{name}");
            }
            assert!(confirm_by_search(&mc, &slice, 40).is_ok(), "{name} at {a}");
            for c in 0..fan.len() {
                let present = slice.pieces.iter().flatten().any(|p| p.cone == c);
                match monotone_search(&mc, c, &a, 40) {
                    Some(t) => {
                        assert!(present, "{name}: search finds a piece the decision misses at {a}");
                        assert!(monotone_search(&mc, c, &a, t + 3) == Some(t));
                    }
                    None => assert!(!present, "{name}: piece at {a} beyond the search bound"),
                }
            }
        }
    }
}

#[test]
fn frobenius_injective_away_from_excluded_primes() {
    for (name, mc) in all_fixtures() {
        if !mc.is_seminormal() {
            continue;
        }
        let excluded = excluded_primes(&mc).unwrap();
        let ctx = StarContext::new(&mc);
        for p in [2u64, 3, 5] {
            if !excluded.verdict(p).f_pure {
                continue;
            }
            for a in box_points(mc.ambient_dim(), 2) {
                for s in frobenius_check(&mc, &ctx.cells, &a, p) {
                    assert!(s.injective, "{name} p={p} at {a}: {s:?}");
                }
            }
        }
    }
}

#[test]
fn single_cone_criteria_agree() {
    let monoids = [
        vs(&[&[1, 0], &[0, 2], &[1, 1]]),
        vs(&[&[1, 0], &[0, 1]]),
        vs(&[&[1, 0], &[0, 3], &[1, 1], &[1, 2]]),
        vs(&[&[1, 0], &[1, 2], &[1, 1]]),
        vs(&[&[2, 0, 0], &[0, 2, 0], &[1, 1, 0], &[0, 0, 1]]),
    ];
    for g in monoids {
        let d = g[0].dim();
        let cone = tfr_core::polyhedral::Cone::new(d, &g).unwrap();
        let m = tfr_core::monoid::AffineMonoid::new(d, &g).unwrap();
        let fan = tfr_core::polyhedral::Fan::new(d, &[cone]).unwrap();
        let top = fan.maximal()[0];
        let mc = tfr_core::moncomplex::MonoidalComplex::build(fan, &[(top, g.clone())].into(), false, None).unwrap();
        let report = excluded_primes(&mc).unwrap();
        assert!(report.excluded.keys().all(|&p| p < 100));
        for p in (2..100).filter(|&p| is_prime(p)) {
            let f = monoid_f_injective(&m, p).unwrap();
            assert_eq!(f.injective, report.verdict(p).f_pure, "{g:?} at {p}");
        }
    }
}
