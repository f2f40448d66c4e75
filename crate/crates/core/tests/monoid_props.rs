mod common;

use std::collections::BTreeSet;

use common::*;
use num_bigint::BigInt;
use tfr_core::lattice::IntVector;
use tfr_core::monoid::{cone_points_in_box, AffineMonoid};

/// All sums of generators with grading at most `bound`, by brute force over
/// coefficient vectors.
fn brute_force(m: &AffineMonoid, bound: i64) -> BTreeSet<IntVector> {
    fn go(m: &AffineMonoid, i: usize, cur: IntVector, left: i64, out: &mut BTreeSet<IntVector>) {
        if i == m.generators().len() {
            out.insert(cur);
            return;
        }
        let g = &m.generators()[i];
        let dg: i64 = m.degree(g).try_into().unwrap();
        let mut cur = cur;
        let mut left = left;
        loop {
            go(m, i + 1, cur.clone(), left, out);
            left -= dg;
            if left < 0 {
                break;
            }
            cur = &cur + g;
        }
    }
    let mut out = BTreeSet::new();
    go(m, 0, IntVector::zero(m.ambient_dim()), bound, &mut out);
    out
}

fn maximal_monoids() -> Vec<(String, AffineMonoid)> {
    all_fixtures()
        .into_iter()
        .flat_map(|(name, mc)| {
            mc.fan().maximal().iter().map(|&i| (format!("{name}/{}", mc.fan().cone(i)), mc.monoid(i).clone())).collect::<Vec<_>>()
        })
        .chain([
            ("ex6".to_string(), AffineMonoid::new(2, &vs(&[&[1, 0], &[0, 2], &[1, 1]])).unwrap()),
            ("cusp".to_string(), AffineMonoid::new(2, &vs(&[&[3, 0], &[3, 1], &[3, 3]])).unwrap()),
            ("twothree".to_string(), AffineMonoid::new(2, &vs(&[&[2, 0], &[3, 0], &[0, 1]])).unwrap()),
        ])
        .collect()
}

#[test]
fn membership_matches_coefficient_enumeration() {
    for (name, m) in maximal_monoids() {
        let bound = 12;
        let members = brute_force(&m, bound);
        let box_points: BTreeSet<IntVector> = cone_points_in_box(m.cone(), 12)
            .into_iter()
            .filter(|x| m.degree(x) <= BigInt::from(bound))
            .collect();
        assert!(members.is_subset(&box_points), "{name}: box too small");
        for x in &box_points {
            assert_eq!(m.contains(x), members.contains(x), "{name}: {x}");
            if let Some(c) = m.certificate(x) {
                let mut sum = IntVector::zero(m.ambient_dim());
                for (g, k) in m.generators().iter().zip(c) {
                    sum = &sum + &g.scale_i64(k as i64);
                }
                assert_eq!(&sum, x);
            }
        }
    }
}

#[test]
fn normalization_is_idempotent() {
    for (name, m) in maximal_monoids() {
        let hb = m.hilbert_basis().elements.clone();
        let n = AffineMonoid::new(m.ambient_dim(), &hb).unwrap();
        assert_eq!(n.hilbert_basis().elements, hb, "{name}");
        assert!(n.check(None).unwrap().normal, "{name}");
    }
}

#[test]
fn seminormalization_sandwich_and_idempotence() {
    for (name, m) in maximal_monoids() {
        let s = m.seminormalize(None).unwrap().monoid;
        assert!(m.generators().iter().all(|g| s.contains(g)), "{name}: M in +M");
        assert!(s.generators().iter().all(|g| m.in_normalization(g)), "{name}: +M in normalization");
        assert!(s.generators().iter().all(|g| m.in_seminormalization(g)), "{name}");
        let ss = s.seminormalize(None).unwrap();
        assert!(ss.monoid.same_monoid(&s), "{name}: not idempotent");
        assert_eq!(ss.witness, None, "{name}");
        let chk = m.check(None).unwrap();
        assert!(!chk.normal || chk.seminormal, "{name}");
        assert_eq!(chk.seminormal, s.same_monoid(&m), "{name}");
    }
}

#[test]
fn documented_checks() {
    let ex6 = AffineMonoid::new(2, &vs(&[&[1, 0], &[0, 2], &[1, 1]])).unwrap().check(None).unwrap();
    assert!(ex6.seminormal && !ex6.normal);
    assert_eq!(ex6.normal_witness, Some(v(&[0, 1])));
    let cusp = AffineMonoid::new(2, &vs(&[&[3, 0], &[3, 1], &[3, 3]])).unwrap().check(None).unwrap();
    assert!(!cusp.seminormal);
    assert_eq!(cusp.seminormal_witness, Some(v(&[3, 2])));
    let free = AffineMonoid::new(2, &vs(&[&[1, 0], &[0, 1]])).unwrap().check(None).unwrap();
    assert!(free.seminormal && free.normal);
}

#[test]
fn complex_level_invariants() {
    for (name, mc) in all_fixtures() {
        let again = mc.restrict(mc.fan()).unwrap();
        assert!(again.same_complex(&mc), "{name}: restrict(fan) changed the complex");
        let s = mc.seminormalize().unwrap();
        assert_eq!(s.fan(), mc.fan(), "{name}");
        assert!(s.is_seminormal());
        assert!(s.seminormalize().unwrap().same_complex(&s), "{name}");
        let fan = mc.fan();
        for &c in fan.maximal() {
            for &d in fan.faces_of(c) {
                let (mc_, md) = (mc.monoid(c), mc.monoid(d));
                let face = fan.cone(d);
                assert!(md.generators().iter().all(|g| mc_.contains(g) && face.contains(g)), "{name}");
                assert!(mc_.generators().iter().filter(|g| face.contains(g)).all(|g| md.contains(g)), "{name}");
            }
        }
    }
}
