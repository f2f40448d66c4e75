mod common;

use common::*;
use tfr_core::cech::{cech_degree, frobenius_check};
use tfr_core::cohomology::{depth, star_classes, Characteristic, StarContext};
use tfr_core::frobenius::{excluded_primes, weak_f_regular, WeakFRegularReason};
use tfr_core::lattice::IntVector;
use tfr_core::monoid::cone_points_in_box;

const CHARS: [Characteristic; 2] = [Characteristic::Zero, Characteristic::Prime(2)];

#[test]
fn fix_b_h2_at_zero_minus_one() {
    let mc = fix_b();
    let ctx = StarContext::new(&mc);
    let a = v(&[0, -1]);
    let f = ctx.local_cohomology_degree(&a);
    let o = cech_degree(&mc, &ctx.cells, &a).table.resized(3);
    for ch in CHARS {
        assert_eq!(f.table.dims(ch), vec![0, 0, 1], "{ch}");
        assert_eq!(o.dims(ch), vec![0, 0, 1], "{ch}");
    }
    assert!(!mc.is_seminormal());
}

#[test]
fn fix_c_normalization_gap() {
    let mc = fix_c();
    let c = mc.fan().index_of(&tfr_core::polyhedral::Cone::new(2, &vs(&[&[1, 0], &[0, 1]])).unwrap()).unwrap();
    let m = mc.monoid(c);
    let mut gap: Vec<IntVector> = cone_points_in_box(m.cone(), 6)
        .into_iter()
        .filter(|x| m.degree(x) <= 6.into() && m.in_normalization(x) && !m.contains(x))
        .collect();
    gap.sort();
    assert_eq!(gap, vs(&[&[0, 1], &[0, 3], &[0, 5]]));
    let chk = m.check(None).unwrap();
    assert!(chk.seminormal && !chk.normal);
}

#[test]
fn fix_c_excluded_primes() {
    let mc = fix_c();
    let r = excluded_primes(&mc).unwrap();
    assert_eq!(r.excluded_primes(), vec![2]);
    let w = &r.excluded[&2];
    assert_eq!(mc.fan().cone(w.face).rays(), &vs(&[&[0, 1]])[..]);
    assert_eq!(mc.fan().cone(w.maximal).rays(), &vs(&[&[0, 1], &[1, 0]])[..]);
    assert_eq!(w.divisor, 2.into());
    assert!(!r.verdict(2).f_pure && r.verdict(3).f_split);
}

#[test]
fn fix_c_depth() {
    let mc = fix_c();
    for ch in CHARS {
        let d = depth(&mc, ch).unwrap();
        assert_eq!((d.depth, d.dim, d.is_cm), (2, 2, true), "{ch}");
    }
}

#[test]
fn fix_c_stars() {
    let mc = fix_c();
    let ctx = StarContext::new(&mc);
    let rays = |s: Vec<usize>| -> Vec<Vec<IntVector>> { s.iter().map(|&i| mc.fan().cone(i).rays().to_vec()).collect() };
    assert_eq!(rays(ctx.star(&v(&[0, 1]))), vec![vs(&[&[0, 1], &[1, 0]])]);
    let mut s2 = rays(ctx.star(&v(&[0, 2])));
    s2.sort();
    let mut want = vec![vs(&[&[0, 1]]), vs(&[&[0, 1], &[1, 0]]), vs(&[&[-1, 1], &[0, 1]])];
    want.sort();
    assert_eq!(s2, want);
}

#[test]
fn fix_c_frobenius_bijective_on_h2() {
    let mc = fix_c();
    let ctx = StarContext::new(&mc);
    for b in [[0, -1], [0, -2], [-1, -1], [-2, -2]] {
        let st = frobenius_check(&mc, &ctx.cells, &v(&b), 2);
        let h2 = st.iter().find(|s| s.index == 2).unwrap();
        assert!(h2.bijective, "{b:?}: {h2:?}");
        assert_eq!(h2.source_dim, 1);
    }
}

#[test]
fn fix_c_star_classes() {
    let classes = star_classes(&fix_c());
    let interior = classes.iter().filter(|c| c.carrier.is_some()).count();
    assert_eq!(interior, 11);
    assert_eq!(classes.len(), 12);
}

#[test]
fn weak_f_regularity() {
    assert_eq!(weak_f_regular(&fix_b()).reason, WeakFRegularReason::MultipleMaximalCones(2));
    let single = complex(2, &[(&[&[1, 0], &[0, 1]], &[&[1, 0], &[0, 1]])], false);
    assert!(weak_f_regular(&single).possible);
    assert!(excluded_primes(&single).unwrap().excluded.is_empty());
    let nn = complex(2, &[(&[&[1, 0], &[0, 1]], &[&[1, 0], &[0, 2], &[1, 1]])], false);
    let w = weak_f_regular(&nn);
    assert!(!w.possible);
    match w.reason {
        WeakFRegularReason::NonNormalMonoid { witness, .. } => assert_eq!(witness, Some(v(&[0, 1]))),
        r => panic!("{r:?}"),
    }
}

#[test]
fn stanley_fixtures_f_pure_everywhere() {
    for mc in [stanley_line(), stanley_octant()] {
        assert!(excluded_primes(&mc).unwrap().excluded.is_empty());
    }
}
