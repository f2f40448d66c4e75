//! Frobenius splitting in positive characteristic: excluded primes of a
//! seminormal complex, the face criterion for a single monoid, and weak
//! F-regularity.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::lattice::{intersect, quotient_invariants, IntVector, LatticeBasis};
use crate::monoid::{AffineMonoid, MonoidError};
use crate::moncomplex::MonoidalComplex;
use crate::polyhedral::Cone;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrobeniusError {
    #[error("complex is not seminormal (witness {witness:?} in {cone}); F-purity forces seminormality")]
    NotSeminormal { cone: Box<Cone>, witness: Option<IntVector> },
    #[error("monoid is not seminormal (witness {0:?})")]
    MonoidNotSeminormal(Option<IntVector>),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
}

/// A prime dividing the elementary divisor `divisor` of
/// `(Z M_C ∩ lin D) / Z M_D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeWitness {
    pub prime: u64,
    /// Fan indices of the maximal cone `C` and its face `D`.
    pub maximal: usize,
    pub face: usize,
    pub divisor: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FPurityReport {
    /// One witness per excluded prime, keyed by the prime.
    pub excluded: BTreeMap<u64, PrimeWitness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub f_pure: bool,
    pub f_split: bool,
}

impl FPurityReport {
    pub fn excluded_primes(&self) -> Vec<u64> {
        self.excluded.keys().copied().collect()
    }

    pub fn verdict(&self, p: u64) -> Verdict {
        let ok = !self.excluded.contains_key(&p);
        Verdict { f_pure: ok, f_split: ok }
    }
}

/// Nontrivial elementary divisors of `(L ∩ lin face) / sub`.
fn face_divisors(l: &LatticeBasis, face: &Cone, sub: &LatticeBasis) -> Vec<BigInt> {
    let sup = intersect(l, face.lin());
    let q = quotient_invariants(sub, &sup).expect("face group lies in the ambient group");
    assert_eq!(q.free_rank, 0, "face monoid spans its face");
    q.divisors.into_iter().filter(|d| !d.is_one()).collect()
}

pub fn excluded_primes(mc: &MonoidalComplex) -> Result<FPurityReport, FrobeniusError> {
    if !mc.is_seminormal() {
        let (i, chk) = mc
            .checks()
            .iter()
            .find(|(_, c)| !c.seminormal)
            .expect("a non-seminormal complex has a failing maximal cone");
        return Err(FrobeniusError::NotSeminormal {
            cone: Box::new(mc.fan().cone(*i).clone()),
            witness: chk.seminormal_witness.clone(),
        });
    }
    let fan = mc.fan();
    let mut excluded = BTreeMap::new();
    for &c in fan.maximal() {
        let lc = mc.monoid(c).group();
        for &d in fan.faces_of(c) {
            for divisor in face_divisors(lc, fan.cone(d), mc.monoid(d).group()) {
                for prime in crate::lattice::prime_factors(&divisor) {
                    excluded
                        .entry(prime)
                        .or_insert_with(|| PrimeWitness { prime, maximal: c, face: d, divisor: divisor.clone() });
                }
            }
        }
    }
    Ok(FPurityReport { excluded })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidFInjective {
    pub injective: bool,
    /// A face whose quotient has `p`-torsion, with the divisor.
    pub witness: Option<(Cone, BigInt)>,
}

/// Face criterion for `k[M]` at the prime `p`; decides F-injectivity,
/// F-purity and F-splitness together for seminormal `M`.
pub fn monoid_f_injective(m: &AffineMonoid, p: u64) -> Result<MonoidFInjective, FrobeniusError> {
    let chk = m.check(None)?;
    if !chk.seminormal {
        return Err(FrobeniusError::MonoidNotSeminormal(chk.seminormal_witness));
    }
    let pb = BigInt::from(p);
    for face in m.cone().face_lattice().faces {
        let sub = m.restrict_to_face(&face);
        for d in face_divisors(m.group(), &face, sub.group()) {
            if (&d % &pb) == BigInt::from(0) {
                return Ok(MonoidFInjective { injective: false, witness: Some((face, d)) });
            }
        }
    }
    Ok(MonoidFInjective { injective: true, witness: None })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeakFRegularReason {
    SingleNormalCone,
    MultipleMaximalCones(usize),
    NonNormalMonoid { cone: Cone, witness: Option<IntVector> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakFRegular {
    pub possible: bool,
    pub reason: WeakFRegularReason,
}

pub fn weak_f_regular(mc: &MonoidalComplex) -> WeakFRegular {
    let maximal = mc.fan().maximal();
    if maximal.len() != 1 {
        return WeakFRegular { possible: false, reason: WeakFRegularReason::MultipleMaximalCones(maximal.len()) };
    }
    if let Some((i, chk)) = mc.checks().iter().find(|(_, c)| !c.normal) {
        return WeakFRegular {
            possible: false,
            reason: WeakFRegularReason::NonNormalMonoid {
                cone: mc.fan().cone(*i).clone(),
                witness: chk.normal_witness.clone(),
            },
        };
    }
    WeakFRegular { possible: true, reason: WeakFRegularReason::SingleNormalCone }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(gens: &[&[i64]]) -> AffineMonoid {
        let g: Vec<IntVector> = gens.iter().map(|x| IntVector::from_i64(x)).collect();
        AffineMonoid::new(2, &g).unwrap()
    }

    #[test]
    fn example_monoid_two_torsion() {
        let mon = m(&[&[1, 0], &[0, 2], &[1, 1]]);
        let r2 = monoid_f_injective(&mon, 2).unwrap();
        assert!(!r2.injective);
        let (face, d) = r2.witness.unwrap();
        assert_eq!(face.rays(), &[IntVector::from_i64(&[0, 1])]);
        assert_eq!(d, BigInt::from(2));
        assert!(monoid_f_injective(&mon, 3).unwrap().injective);
    }

    #[test]
    fn free_monoid_every_prime() {
        let mon = m(&[&[1, 0], &[0, 1]]);
        for p in [2, 3, 5, 7] {
            assert!(monoid_f_injective(&mon, p).unwrap().injective);
        }
    }

    #[test]
    fn non_seminormal_rejected() {
        let mon = m(&[&[2, 0], &[3, 0], &[0, 1]]);
        assert!(matches!(monoid_f_injective(&mon, 2), Err(FrobeniusError::MonoidNotSeminormal(_))));
    }
}
