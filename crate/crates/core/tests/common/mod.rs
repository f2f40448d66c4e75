#![allow(dead_code)]

pub mod boxes;

use std::collections::BTreeMap;

use tfr_core::lattice::IntVector;
use tfr_core::moncomplex::MonoidalComplex;
use tfr_core::polyhedral::{Cone, Fan};

pub fn v(x: &[i64]) -> IntVector {
    IntVector::from_i64(x)
}

pub fn vs(xs: &[&[i64]]) -> Vec<IntVector> {
    xs.iter().map(|x| v(x)).collect()
}

/// Builds a complex from (cone generators, monoid generators) pairs.
pub fn complex(d: usize, cones: &[(&[&[i64]], &[&[i64]])], stanley: bool) -> MonoidalComplex {
    let cs: Vec<Cone> = cones.iter().map(|(c, _)| Cone::new(d, &vs(c)).unwrap()).collect();
    let fan = Fan::new(d, &cs).unwrap();
    let mut gens = BTreeMap::new();
    if !stanley {
        for (c, (_, m)) in cs.iter().zip(cones) {
            gens.insert(fan.index_of(c).unwrap(), vs(m));
        }
    }
    MonoidalComplex::build(fan, &gens, stanley, None).unwrap()
}

const A1: &[i64] = &[2, 0, 0];
const A2: &[i64] = &[0, 2, 0];
const A3: &[i64] = &[0, 0, 2];
const A4: &[i64] = &[1, 1, 0];

/// Three cones on the boundary of the positive octant with a non-normal
/// monoid on one of them.
pub fn fix_a() -> MonoidalComplex {
    complex(3, &[(&[A1, A2], &[A1, A2, A4]), (&[A1, A3], &[A1, A3]), (&[A2, A3], &[A2, A3])], false)
}

/// Two plane cones; the first monoid misses `(3,2)`.
pub fn fix_b() -> MonoidalComplex {
    let (x, y, z, t): (&[i64], &[i64], &[i64], &[i64]) = (&[3, 0], &[3, 1], &[3, 3], &[0, 1]);
    complex(2, &[(&[x, y, z], &[x, y, z]), (&[z, t], &[z, t])], false)
}

/// Seminormal, non-normal, Cohen–Macaulay of depth 2; F-pure away from 2.
pub fn fix_c() -> MonoidalComplex {
    let (x, y, t, z): (&[i64], &[i64], &[i64], &[i64]) = (&[1, 0], &[0, 2], &[1, 1], &[-2, 2]);
    complex(2, &[(&[x, y, t], &[x, y, t]), (&[y, z], &[y, z])], false)
}

pub fn stanley_line() -> MonoidalComplex {
    complex(1, &[(&[&[1]], &[]), (&[&[-1]], &[])], true)
}

pub fn stanley_octant() -> MonoidalComplex {
    let (e1, e2, e3): (&[i64], &[i64], &[i64]) = (&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]);
    complex(3, &[(&[e1, e2], &[]), (&[e1, e3], &[]), (&[e2, e3], &[])], true)
}

pub fn all_fixtures() -> Vec<(&'static str, MonoidalComplex)> {
    vec![
        ("FIX-A", fix_a()),
        ("FIX-B", fix_b()),
        ("FIX-C", fix_c()),
        ("STANLEY-LINE", stanley_line()),
        ("STANLEY-OCTANT", stanley_octant()),
    ]
}
