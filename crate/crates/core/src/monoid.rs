//! Affine monoids: membership, normalization and seminormalization.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::lattice::{coset_representatives, intersect, rank, solve_rational, IntVector, LatticeBasis};
use crate::polyhedral::{Cone, PolyhedralError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoidError {
    #[error("monoid is not positive: {0}")]
    NotPositive(PolyhedralError),
    #[error("generator {vector} has length {found}, expected {expected}")]
    DimensionMismatch { vector: IntVector, expected: usize, found: usize },
    #[error("degree bound {bound} too small: {element} is not generated")]
    BoundTooSmall { bound: u64, element: IntVector },
    #[error("monoid is not seminormal (witness {witness})")]
    NotSeminormal { witness: IntVector },
}

/// A positive affine monoid `M` in `Z^d` with its cone, group and grading.
pub struct AffineMonoid {
    ambient_dim: usize,
    generators: Vec<IntVector>,
    cone: Cone,
    group: LatticeBasis,
    grading: IntVector,
    membership: Mutex<HashMap<IntVector, Option<usize>>>,
    hilbert: OnceLock<HilbertBasis>,
}

impl Clone for AffineMonoid {
    fn clone(&self) -> Self {
        AffineMonoid {
            ambient_dim: self.ambient_dim,
            generators: self.generators.clone(),
            cone: self.cone.clone(),
            group: self.group.clone(),
            grading: self.grading.clone(),
            membership: Mutex::new(HashMap::new()),
            hilbert: self.hilbert.clone(),
        }
    }
}

impl fmt::Debug for AffineMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "monoid{:?}", self.generators)
    }
}

/// Equality of generator lists; use [`AffineMonoid::same_monoid`] to compare
/// element sets.
impl PartialEq for AffineMonoid {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.generators == other.generators
    }
}

impl Eq for AffineMonoid {}

/// Sum of the primitive inward facet normals of a pointed cone; strictly
/// positive on every nonzero point of the cone.
pub fn cone_grading(cone: &Cone) -> IntVector {
    cone.facet_normals().iter().fold(IntVector::zero(cone.ambient_dim()), |acc, f| &acc + f)
}

impl AffineMonoid {
    pub fn new(ambient_dim: usize, generators: &[IntVector]) -> Result<AffineMonoid, MonoidError> {
        for g in generators {
            if g.dim() != ambient_dim {
                return Err(MonoidError::DimensionMismatch {
                    vector: g.clone(),
                    expected: ambient_dim,
                    found: g.dim(),
                });
            }
        }
        let gens: Vec<IntVector> = generators
            .iter()
            .filter(|g| !g.is_zero())
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let cone = Cone::new(ambient_dim, &gens).map_err(MonoidError::NotPositive)?;
        let group = LatticeBasis::from_generators(ambient_dim, &gens);
        let grading = cone_grading(&cone);
        assert!(gens.iter().all(|g| g.dot(&grading).is_positive()), "grading not positive on generators");
        Ok(AffineMonoid {
            ambient_dim,
            generators: gens,
            cone,
            group,
            grading,
            membership: Mutex::new(HashMap::new()),
            hilbert: OnceLock::new(),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Distinct nonzero generators in lexicographic order.
    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    /// The group `ZM`.
    pub fn group(&self) -> &LatticeBasis {
        &self.group
    }

    pub fn grading(&self) -> &IntVector {
        &self.grading
    }

    pub fn degree(&self, v: &IntVector) -> BigInt {
        self.grading.dot(v)
    }

    pub fn rank(&self) -> usize {
        self.cone.dim()
    }

    /// The submonoid `M ∩ F` for a face `F` of the cone; it is generated by
    /// the generators lying in `F`.
    pub fn restrict_to_face(&self, face: &Cone) -> AffineMonoid {
        let gens: Vec<IntVector> = self.generators.iter().filter(|g| face.contains(g)).cloned().collect();
        AffineMonoid::new(self.ambient_dim, &gens).expect("face of a positive monoid")
    }

    pub fn contains(&self, v: &IntVector) -> bool {
        self.certificate(v).is_some()
    }

    /// Coefficients `c` with `sum c_i g_i = v` when `v ∈ M`. Decided by
    /// recursion on the grading: every coefficient is at most `ℓ(v)`.
    pub fn certificate(&self, v: &IntVector) -> Option<Vec<u64>> {
        if v.dim() != self.ambient_dim || !self.cone.contains(v) || !self.group.contains(v) {
            return None;
        }
        let mut cache = self.membership.lock().expect("membership cache poisoned");
        if !self.member_rec(v, &mut cache) {
            return None;
        }
        let mut coeffs = vec![0u64; self.generators.len()];
        let mut cur = v.clone();
        while !cur.is_zero() {
            let i = cache[&cur].expect("member has a predecessor");
            coeffs[i] += 1;
            cur = &cur - &self.generators[i];
        }
        Some(coeffs)
    }

    fn member_rec(&self, v: &IntVector, cache: &mut HashMap<IntVector, Option<usize>>) -> bool {
        if v.is_zero() {
            return true;
        }
        if let Some(r) = cache.get(v) {
            return r.is_some();
        }
        let mut found = None;
        for (i, g) in self.generators.iter().enumerate() {
            let w = v - g;
            if self.cone.contains(&w) && self.member_rec(&w, cache) {
                found = Some(i);
                break;
            }
        }
        cache.insert(v.clone(), found);
        found.is_some()
    }

    /// `v` lies in the normalization `ZM ∩ R_+M`.
    pub fn in_normalization(&self, v: &IntVector) -> bool {
        self.cone.contains(v) && self.group.contains(v)
    }

    /// Mutual generator membership.
    pub fn same_monoid(&self, other: &AffineMonoid) -> bool {
        self.generators.iter().all(|g| other.contains(g)) && other.generators.iter().all(|g| self.contains(g))
    }

    /// Irreducible elements, i.e. the minimal generating set.
    pub fn irreducibles(&self) -> Vec<IntVector> {
        self.generators
            .iter()
            .filter(|g| {
                let others: Vec<IntVector> = self.generators.iter().filter(|h| h != g).cloned().collect();
                !AffineMonoid::new(self.ambient_dim, &others).is_ok_and(|m| m.contains(g))
            })
            .cloned()
            .collect()
    }

    pub fn hilbert_basis(&self) -> &HilbertBasis {
        self.hilbert.get_or_init(|| hilbert_basis_of_cone(&self.cone, &self.group))
    }

    /// `v` lies in the seminormalization, i.e. in `Z(M∩F) ∩ relint F` for the
    /// face `F` whose relative interior contains `v`.
    pub fn in_seminormalization(&self, v: &IntVector) -> bool {
        if !self.cone.contains(v) {
            return false;
        }
        let face_gens: Vec<IntVector> = self.generators.iter().filter(|g| self.supports(v, g)).cloned().collect();
        LatticeBasis::from_generators(self.ambient_dim, &face_gens).contains(v)
    }

    /// `g` lies in the smallest face of the cone containing `v`.
    fn supports(&self, v: &IntVector, g: &IntVector) -> bool {
        self.cone.facet_normals().iter().all(|f| !f.dot(v).is_zero() || f.dot(g).is_zero())
    }

    /// Generator of `Z(M∩ρ) ∩ ρ` for a ray `ρ` of the cone.
    fn ray_lattice_generator(&self, ray: &IntVector) -> IntVector {
        let on_ray: Vec<IntVector> = self.generators.iter().filter(|g| g.positively_parallel(ray)).cloned().collect();
        let g = on_ray.iter().fold(BigInt::zero(), |acc, v| acc.gcd(&v.content()));
        ray.scale(&g)
    }

    /// A degree bound for the generators of the seminormalization: every
    /// irreducible `x` satisfies `ℓ(x) <= dim C · max_ρ ℓ(u_ρ)` with `u_ρ` the
    /// generator of `Z(M∩ρ) ∩ ρ`. Writing `x = Σ c_i u_i` in a simplicial cone
    /// spanned by rays of its face, a coefficient `c_i > 1` splits off `u_i`
    /// while keeping the remainder in the same relative interior.
    pub fn seminormal_degree_bound(&self) -> u64 {
        let max = self
            .cone
            .rays()
            .iter()
            .map(|r| self.degree(&self.ray_lattice_generator(r)))
            .max()
            .unwrap_or_else(BigInt::zero);
        (max * BigInt::from(self.cone.dim())).to_u64().expect("degree bound fits in u64")
    }

    /// The default seminormalization bound: the larger of twice the maximal
    /// parallelepiped degree and [`Self::seminormal_degree_bound`].
    pub fn default_seminormal_bound(&self) -> u64 {
        let par = self.hilbert_basis().max_parallelepiped_degree;
        (2 * par).max(self.seminormal_degree_bound())
    }

    pub fn seminormalize(&self, bound: Option<u64>) -> Result<SeminormalizationResult, MonoidError> {
        let bound = bound.unwrap_or_else(|| self.default_seminormal_bound());
        let hb = self.hilbert_basis();
        let small = elements_up_to(&hb.elements, &self.grading, bound);
        let members: BTreeSet<IntVector> =
            small.into_iter().filter(|x| !x.is_zero() && self.in_seminormalization(x)).collect();
        let mut by_degree: Vec<&IntVector> = members.iter().collect();
        by_degree.sort_by_key(|x| (self.degree(x), (*x).clone()));
        let mut gens: Vec<IntVector> = Vec::new();
        for x in by_degree {
            let dx = self.degree(x);
            let reducible = members.iter().any(|y| self.degree(y) < dx && members.contains(&(x - y)));
            if !reducible {
                gens.push(x.clone());
            }
        }
        let plus = AffineMonoid::new(self.ambient_dim, &gens).expect("seminormalization is positive");
        let verified = 2 * bound;
        let mut check: Vec<IntVector> = elements_up_to(&hb.elements, &self.grading, verified)
            .into_iter()
            .filter(|x| self.in_seminormalization(x))
            .collect();
        // generators of M and of ⁺M ∩ (Hilbert basis) may lie above the bound
        check.extend(self.generators.iter().cloned());
        check.extend(hb.elements.iter().filter(|h| self.in_seminormalization(h)).cloned());
        check.sort_by_key(|x| (self.degree(x), x.clone()));
        check.dedup();
        if let Some(x) = check.into_iter().find(|x| !plus.contains(x)) {
            return Err(MonoidError::BoundTooSmall { bound, element: x });
        }
        let witness = plus.generators().iter().find(|g| !self.contains(g)).cloned();
        Ok(SeminormalizationResult { monoid: plus, bound, verified_bound: verified, witness })
    }

    /// Normality and seminormality, with witnesses and a cross-check against
    /// the definition (`x ∈ ZM`, `2x, 3x ∈ M` implies `x ∈ M`) on all
    /// normalization elements of degree at most the bound.
    pub fn check(&self, bound: Option<u64>) -> Result<MonoidCheck, MonoidError> {
        let hb = self.hilbert_basis();
        let normal_witness = hb.elements.iter().find(|h| !self.contains(h)).cloned();
        let semi = self.seminormalize(bound)?;
        let mut scan: Vec<IntVector> = elements_up_to(&hb.elements, &self.grading, semi.bound).into_iter().collect();
        scan.sort_by_key(|x| (self.degree(x), x.clone()));
        let scan_witness = scan
            .into_iter()
            .find(|x| !self.contains(x) && self.contains(&x.scale_i64(2)) && self.contains(&x.scale_i64(3)));
        if scan_witness.is_some() && semi.witness.is_none() {
            panic!("seminormality decisions disagree on {self:?}");
        }
        Ok(MonoidCheck {
            normal: normal_witness.is_none(),
            seminormal: semi.witness.is_none(),
            normal_witness,
            seminormal_witness: semi.witness,
            scan_witness,
            verified_bound: semi.verified_bound,
        })
    }
}

/// Hilbert basis of `L ∩ C` for a pointed cone `C` and a lattice `L` spanning
/// `lin C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertBasis {
    pub elements: Vec<IntVector>,
    /// Largest grading value among the fundamental parallelepiped points.
    pub max_parallelepiped_degree: u64,
}

/// Placing triangulation of a pointed cone on its rays (in order): a list of
/// simplicial cones given by ray indices.
pub fn placing_triangulation(rays: &[IntVector]) -> Vec<Vec<usize>> {
    let Some(_) = rays.first() else { return Vec::new() };
    let mut simplices: Vec<Vec<usize>> = vec![vec![0]];
    let mut placed: Vec<IntVector> = vec![rays[0].clone()];
    let mut cur_rank = 1;
    for (j, r) in rays.iter().enumerate().skip(1) {
        placed.push(r.clone());
        if rank(&placed) > cur_rank {
            cur_rank += 1;
            for s in &mut simplices {
                s.push(j);
            }
            continue;
        }
        let span = LatticeBasis::from_generators(r.dim(), &placed);
        let mut counts: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
        for s in &simplices {
            for (k, &opp) in s.iter().enumerate() {
                let mut f = s.clone();
                f.remove(k);
                counts.entry(f).and_modify(|e| e.0 += 1).or_insert((1, opp));
            }
        }
        let mut added: Vec<Vec<usize>> = Vec::new();
        let mut facets: Vec<(Vec<usize>, usize)> =
            counts.into_iter().filter(|(_, (c, _))| *c == 1).map(|(f, (_, opp))| (f, opp)).collect();
        facets.sort();
        for (f, opp) in facets {
            let n = normal_in_span(&span, &f.iter().map(|&i| rays[i].clone()).collect::<Vec<_>>());
            let side = n.dot(&rays[opp]);
            let rv = n.dot(r);
            if !side.is_zero() && !rv.is_zero() && side.is_positive() != rv.is_positive() {
                let mut s = f.clone();
                s.push(j);
                s.sort_unstable();
                added.push(s);
            }
        }
        assert!(!added.is_empty(), "placing step found no visible facet");
        simplices.extend(added);
    }
    simplices
}

/// A nonzero vector of the span orthogonal to `face` (which has corank one in it).
fn normal_in_span(span: &LatticeBasis, face: &[IntVector]) -> IntVector {
    let b = span.basis();
    let rows: Vec<IntVector> =
        face.iter().map(|f| IntVector::new(b.iter().map(|w| w.dot(f)).collect())).collect();
    let m = crate::lattice::IntMatrix::from_rows(b.len(), &rows);
    let ker = crate::lattice::integer_kernel(&m);
    assert_eq!(ker.len(), 1, "face is not of corank one");
    span.combination(ker[0].entries())
}

pub fn hilbert_basis_of_cone(cone: &Cone, lattice: &LatticeBasis) -> HilbertBasis {
    let d = cone.ambient_dim();
    let grading = cone_grading(cone);
    let rays: Vec<IntVector> = cone
        .rays()
        .iter()
        .map(|r| {
            let line = intersect(lattice, &LatticeBasis::from_generators(d, std::slice::from_ref(r)));
            let g = line.basis()[0].clone();
            if g.dot(r).is_negative() { -&g } else { g }
        })
        .collect();
    let mut candidates: BTreeSet<IntVector> = rays.iter().cloned().collect();
    let mut max_par = BigInt::zero();
    for simplex in placing_triangulation(&rays) {
        let basis: Vec<IntVector> = simplex.iter().map(|&i| rays[i].clone()).collect();
        let sub = LatticeBasis::from_generators(d, &basis);
        for rep in coset_representatives(&sub, lattice).expect("simplex spans the lattice rank") {
            let coeffs = solve_rational(&basis, &rep).expect("representative lies in the span");
            let mut p = rep.clone();
            for (c, b) in coeffs.iter().zip(&basis) {
                p = &p - &b.scale(&c.floor().to_integer());
            }
            if !p.is_zero() {
                max_par = max_par.max(grading.dot(&p));
                candidates.insert(p);
            }
        }
    }
    let cands: Vec<IntVector> = candidates.into_iter().collect();
    let mut elements: Vec<IntVector> = cands
        .iter()
        .filter(|x| {
            let dx = grading.dot(x);
            !cands.iter().any(|c| {
                grading.dot(c) < dx && {
                    let rest = *x - c;
                    cone.contains(&rest) && lattice.contains(&rest)
                }
            })
        })
        .cloned()
        .collect();
    elements.sort();
    HilbertBasis {
        elements,
        max_parallelepiped_degree: max_par.to_u64().expect("degree fits in u64"),
    }
}

/// All sums of `gens` (including 0) with grading at most `bound`.
pub fn elements_up_to(gens: &[IntVector], grading: &IntVector, bound: u64) -> BTreeSet<IntVector> {
    let bound = BigInt::from(bound);
    let Some(first) = gens.first() else { return BTreeSet::new() };
    let zero = IntVector::zero(first.dim());
    let mut seen: HashSet<IntVector> = HashSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = &x + g;
            if grading.dot(&y) <= bound && seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

#[derive(Clone, Debug)]
pub struct SeminormalizationResult {
    pub monoid: AffineMonoid,
    /// Degree up to which generators were collected.
    pub bound: u64,
    /// Degree up to which generation was re-checked.
    pub verified_bound: u64,
    /// A generator of the seminormalization outside the original monoid.
    pub witness: Option<IntVector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidCheck {
    pub seminormal: bool,
    pub normal: bool,
    pub normal_witness: Option<IntVector>,
    pub seminormal_witness: Option<IntVector>,
    /// An `x` with `2x, 3x ∈ M`, `x ∉ M` found by direct scan.
    pub scan_witness: Option<IntVector>,
    pub verified_bound: u64,
}

impl MonoidCheck {
    pub fn witness(&self) -> Option<&IntVector> {
        self.seminormal_witness.as_ref().or(self.normal_witness.as_ref())
    }
}

/// Lattice points of `cone` in the box `[-radius, radius]^d`.
pub fn cone_points_in_box(cone: &Cone, radius: i64) -> Vec<IntVector> {
    let d = cone.ambient_dim();
    let mut out = Vec::new();
    let mut cur = vec![-radius; d];
    loop {
        let v = IntVector::from_i64(&cur);
        if cone.contains(&v) {
            out.push(v);
        }
        let mut k = 0;
        loop {
            if k == d {
                return out;
            }
            cur[k] += 1;
            if cur[k] <= radius {
                break;
            }
            cur[k] = -radius;
            k += 1;
        }
    }
}
