mod common;

use common::*;
use proptest::prelude::*;
use tfr_core::lattice::IntVector;
use tfr_core::polyhedral::{CellComplex, Cone, Fan};

#[test]
fn boundary_squares_to_zero_and_diamonds_close() {
    for (name, mc) in all_fixtures() {
        let fan = mc.fan();
        let cells = CellComplex::new(fan).unwrap();
        for t in 1..=cells.top_dim() {
            let prod = cells.boundary(t - 1).mul(&cells.boundary(t));
            assert!(t == 1 || prod.is_zero(), "{name}: d_{} d_{t} != 0", t - 1);
        }
        // augmentation: every ray meets the zero cone with sign 1
        for &r in cells.cells(1) {
            assert_eq!(cells.incidence(r, 0), 1, "{name}");
        }
        for i in 0..fan.len() {
            for &k in fan.faces_of(i) {
                if fan.cone(k).dim() + 2 != fan.cone(i).dim() {
                    continue;
                }
                let between: Vec<usize> = fan.facets_of(i).iter().copied().filter(|&j| fan.is_face(k, j)).collect();
                assert_eq!(between.len(), 2, "{name}: interval is not a diamond");
                let s: i32 = between.iter().map(|&j| cells.incidence(i, j) * cells.incidence(j, k)).sum();
                assert_eq!(s, 0, "{name}: diamond at {} / {}", fan.cone(i), fan.cone(k));
            }
        }
    }
}

#[test]
fn fan_rebuild_is_identity() {
    for (name, mc) in all_fixtures() {
        let fan = mc.fan();
        let again = Fan::new(fan.ambient_dim(), fan.cones()).unwrap();
        assert_eq!(&again, fan, "{name}");
    }
}

#[test]
fn facet_patterns_give_exactly_the_faces() {
    for (name, mc) in all_fixtures() {
        let fan = mc.fan();
        for &c in fan.maximal() {
            let cone = fan.cone(c);
            let mut from_lattice: Vec<Vec<IntVector>> = cone.face_lattice().faces.iter().map(|f| f.rays().to_vec()).collect();
            let mut from_fan: Vec<Vec<IntVector>> = fan.faces_of(c).iter().map(|&f| fan.cone(f).rays().to_vec()).collect();
            from_lattice.sort();
            from_fan.sort();
            assert_eq!(from_lattice, from_fan, "{name}");
            for f in cone.face_lattice().faces {
                // rays of a face are exactly the rays tight on its supporting normals
                let tight: Vec<&IntVector> = cone.facet_normals().iter().filter(|n| f.rays().iter().all(|r| n.dot(r) == 0.into())).collect();
                let rays: Vec<IntVector> = cone.rays().iter().filter(|r| tight.iter().all(|n| n.dot(r) == 0.into())).cloned().collect();
                assert_eq!(rays, f.rays().to_vec(), "{name}");
            }
        }
    }
}

fn gens() -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec(proptest::collection::vec(-4i64..=4, 3), 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn sampled_points(g in gens(), coeffs in proptest::collection::vec(0i64..=5, 5), probe in proptest::collection::vec(-6i64..=6, 3)) {
        let g: Vec<IntVector> = g.iter().map(|x| IntVector::from_i64(x)).collect();
        let Ok(cone) = Cone::new(3, &g) else { return Ok(()) };
        let mut p = IntVector::zero(3);
        for (x, k) in g.iter().zip(&coeffs) {
            p = &p + &x.scale_i64(*k);
        }
        prop_assert!(cone.contains(&p));
        let positive = coeffs.iter().zip(&g).all(|(k, _)| *k > 0);
        if positive {
            prop_assert!(cone.relint_contains(&p));
        }
        prop_assert!(cone.relint_contains(&cone.interior_vector()));
        let probe = IntVector::from_i64(&probe);
        let by_normals = cone.equations().iter().all(|e| e.dot(&probe) == 0.into())
            && cone.facet_normals().iter().all(|n| n.dot(&probe) >= 0.into());
        prop_assert_eq!(cone.contains(&probe), by_normals);
        for r in cone.rays() {
            prop_assert!(cone.contains(r));
        }
    }
}
