//! Rational pointed cones, fans and the oriented cell structure of a fan.
//!
//! A cone is stored by its primitive extreme rays (sorted lexicographically,
//! which is also its identity), inward primitive facet normals lying in its
//! linear span, and integral equations cutting out that span.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{det_sign, independent_prefix, rank, solve_rational, IntMatrix, IntVector, LatticeBasis};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyhedralError {
    #[error("cone is not pointed: both {witness} and its negative lie in it")]
    NotPointed { witness: IntVector },
    #[error("vector {vector} has length {found}, expected {expected}")]
    DimensionMismatch { vector: IntVector, expected: usize, found: usize },
    #[error("a fan needs at least one cone")]
    EmptyFan,
    #[error("the intersection of {first} and {second} is not a common face")]
    BadIntersection { first: Box<Cone>, second: Box<Cone> },
    #[error("cone {0} has a face missing from the cone set")]
    NotFaceClosed(Box<Cone>),
    #[error("incidence function check failed: {0}")]
    IncidenceFailure(String),
}

/// Inequality description of the cone generated by a finite set of vectors
/// (not necessarily pointed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualDescription {
    /// Integral basis of the orthogonal complement of the span.
    pub equations: Vec<IntVector>,
    /// Primitive inward normals of the facets, taken inside the span.
    pub facets: Vec<IntVector>,
}

#[derive(Clone)]
struct Row {
    coeffs: Vec<BigInt>,
    eq: bool,
}

impl Row {
    fn eval(&self, v: &IntVector) -> BigInt {
        self.coeffs.iter().zip(v.entries()).map(|(a, b)| a * b).sum()
    }

    fn normalize(&mut self) {
        let g = self.coeffs.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if !g.is_zero() && !g.is_one() {
            for c in &mut self.coeffs {
                *c = &*c / &g;
            }
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// Facets of `R_+ gens` by Fourier–Motzkin elimination of the multipliers in
/// `x = sum lambda_i g_i, lambda >= 0`. After every elimination step the
/// inequalities are pruned to the facets of the projected cone, recognised by
/// the rank of the generators on which they are tight.
pub fn dual_description(ambient_dim: usize, gens: &[IntVector]) -> DualDescription {
    let gens: Vec<IntVector> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let span = LatticeBasis::from_generators(ambient_dim, &gens);
    let equations = span.orthogonal_equations();
    if gens.is_empty() {
        return DualDescription { equations, facets: Vec::new() };
    }
    let d = ambient_dim;
    let n = gens.len();
    let width = d + n;

    let mut rows: Vec<Row> = Vec::with_capacity(d + n);
    for k in 0..d {
        let mut coeffs = vec![BigInt::zero(); width];
        coeffs[k] = BigInt::one();
        for (i, g) in gens.iter().enumerate() {
            coeffs[d + i] = -&g[k];
        }
        rows.push(Row { coeffs, eq: true });
    }
    for i in 0..n {
        let mut coeffs = vec![BigInt::zero(); width];
        coeffs[d + i] = BigInt::one();
        rows.push(Row { coeffs, eq: false });
    }

    for j in 0..n {
        let col = d + j;
        let pivot = rows.iter().position(|r| r.eq && !r.coeffs[col].is_zero());
        let mut next: Vec<Row> = Vec::new();
        if let Some(p) = pivot {
            let pr = rows[p].clone();
            let cp = pr.coeffs[col].clone();
            let sign = BigInt::from(if cp.is_negative() { -1 } else { 1 });
            for (i, r) in rows.iter().enumerate() {
                if i == p {
                    continue;
                }
                let cr = &r.coeffs[col];
                if cr.is_zero() {
                    next.push(r.clone());
                    continue;
                }
                let f = &sign * cr;
                let coeffs = r
                    .coeffs
                    .iter()
                    .zip(&pr.coeffs)
                    .map(|(a, b)| a * cp.abs() - &f * b)
                    .collect();
                next.push(Row { coeffs, eq: r.eq });
            }
        } else {
            let (mut pos, mut neg) = (Vec::new(), Vec::new());
            for r in &rows {
                let c = &r.coeffs[col];
                if c.is_zero() {
                    next.push(r.clone());
                } else if c.is_positive() {
                    pos.push(r);
                } else {
                    neg.push(r);
                }
            }
            for p in &pos {
                for q in &neg {
                    let (cp, cq) = (&p.coeffs[col], -&q.coeffs[col]);
                    let coeffs = q.coeffs.iter().zip(&p.coeffs).map(|(a, b)| a * cp + b * &cq).collect();
                    next.push(Row { coeffs, eq: false });
                }
            }
        }
        rows = prune(next, &gens, j + 1);
    }

    let lin_basis = span.basis().to_vec();
    let mut facets: Vec<IntVector> = rows
        .iter()
        .filter(|r| !r.eq)
        .map(|r| project_into_span(&IntVector::new(r.coeffs[..d].to_vec()), &lin_basis))
        .filter(|v| !v.is_zero())
        .collect();
    facets.sort();
    facets.dedup();
    DualDescription { equations, facets }
}

/// Generators of the projected cone after eliminating the first `eliminated`
/// multipliers: `(g_i, 0)` for eliminated indices and `(g_i, e_i)` otherwise.
fn projected_generators(gens: &[IntVector], eliminated: usize) -> Vec<IntVector> {
    let n = gens.len();
    gens.iter()
        .enumerate()
        .map(|(i, g)| {
            let mut v = g.entries().to_vec();
            v.extend((0..n).map(|k| if k == i && i >= eliminated { BigInt::one() } else { BigInt::zero() }));
            IntVector::new(v)
        })
        .collect()
}

fn prune(rows: Vec<Row>, gens: &[IntVector], eliminated: usize) -> Vec<Row> {
    let qgens = projected_generators(gens, eliminated);
    let dim = rank(&qgens);
    let mut equalities: Vec<Row> = Vec::new();
    let mut facets: BTreeMap<Vec<usize>, Row> = BTreeMap::new();
    for mut row in rows {
        row.normalize();
        if row.is_zero() {
            continue;
        }
        let values: Vec<BigInt> = qgens.iter().map(|g| row.eval(g)).collect();
        if row.eq {
            debug_assert!(values.iter().all(Zero::is_zero));
            equalities.push(row);
            continue;
        }
        debug_assert!(values.iter().all(|v| !v.is_negative()), "invalid inequality during elimination");
        let tight: Vec<usize> = (0..qgens.len()).filter(|&i| values[i].is_zero()).collect();
        let tight_vecs: Vec<IntVector> = tight.iter().map(|&i| qgens[i].clone()).collect();
        let r = rank(&tight_vecs);
        if r == dim {
            row.eq = true;
            equalities.push(row);
        } else if r + 1 == dim {
            facets.entry(tight).or_insert(row);
        }
    }
    // keep an independent set of equalities
    let mut kept: Vec<Row> = Vec::new();
    let mut kept_vecs: Vec<IntVector> = Vec::new();
    for row in equalities {
        kept_vecs.push(IntVector::new(row.coeffs.clone()));
        if rank(&kept_vecs) == kept_vecs.len() {
            kept.push(row);
        } else {
            kept_vecs.pop();
        }
    }
    kept.extend(facets.into_values());
    kept
}

/// Orthogonal projection of `n` onto the span of `basis`, scaled to a
/// primitive integral vector with the same sign on the span.
fn project_into_span(n: &IntVector, basis: &[IntVector]) -> IntVector {
    let k = basis.len();
    if k == 0 {
        return IntVector::zero(n.dim());
    }
    let to_q = |x: &BigInt| BigRational::from_integer(x.clone());
    // Gram system (B B^T) c = B n
    let mut a: Vec<Vec<BigRational>> = (0..k)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..k).map(|j| to_q(&basis[i].dot(&basis[j]))).collect();
            row.push(to_q(&basis[i].dot(n)));
            row
        })
        .collect();
    for c in 0..k {
        let p = (c..k).find(|&r| !a[r][c].is_zero()).expect("basis is independent");
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..k {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let pr = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(pr) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    let coeffs: Vec<BigRational> = (0..k).map(|i| a[i][k].clone()).collect();
    let denom = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let mut out = IntVector::zero(n.dim());
    for (c, b) in coeffs.iter().zip(basis) {
        let scaled = (c * BigRational::from_integer(denom.clone())).to_integer();
        out = &out + &b.scale(&scaled);
    }
    out.primitive()
}

/// A rational pointed cone.
#[derive(Clone)]
pub struct Cone {
    ambient_dim: usize,
    generators: Vec<IntVector>,
    rays: Vec<IntVector>,
    facets: Vec<IntVector>,
    equations: Vec<IntVector>,
    dim: usize,
    lin: LatticeBasis,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Cone) -> bool {
        self.ambient_dim == other.ambient_dim && self.rays == other.rays
    }
}

impl Eq for Cone {}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cone[")?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Cone {
    /// Builds `R_+ generators`, rejecting non-pointed cones. An empty list
    /// gives the zero cone.
    pub fn new(ambient_dim: usize, generators: &[IntVector]) -> Result<Cone, PolyhedralError> {
        for g in generators {
            if g.dim() != ambient_dim {
                return Err(PolyhedralError::DimensionMismatch {
                    vector: g.clone(),
                    expected: ambient_dim,
                    found: g.dim(),
                });
            }
        }
        let mut gens: Vec<IntVector> = Vec::new();
        for g in generators.iter().filter(|g| !g.is_zero()).map(IntVector::primitive) {
            if !gens.contains(&g) {
                gens.push(g);
            }
        }
        let dual = dual_description(ambient_dim, &gens);
        let tight_on_all = |g: &IntVector| dual.facets.iter().all(|f| f.dot(g).is_zero());
        if let Some(w) = gens.iter().find(|g| tight_on_all(g)) {
            return Err(PolyhedralError::NotPointed { witness: w.clone() });
        }
        let mut rays: Vec<IntVector> = gens
            .iter()
            .filter(|g| {
                let tight: Vec<&IntVector> = dual.facets.iter().filter(|f| f.dot(g).is_zero()).collect();
                let face: Vec<IntVector> =
                    gens.iter().filter(|h| tight.iter().all(|f| f.dot(h).is_zero())).cloned().collect();
                rank(&face) == 1
            })
            .cloned()
            .collect();
        rays.sort();
        let lin = LatticeBasis::from_generators(ambient_dim, &gens).saturation();
        Ok(Cone {
            ambient_dim,
            dim: lin.rank(),
            generators: gens,
            rays,
            facets: dual.facets,
            equations: dual.equations,
            lin,
        })
    }

    pub fn zero(ambient_dim: usize) -> Cone {
        Cone::new(ambient_dim, &[]).expect("zero cone is pointed")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Distinct primitive input generators, in input order.
    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    /// Primitive extreme rays in lexicographic order.
    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn facet_normals(&self) -> &[IntVector] {
        &self.facets
    }

    pub fn equations(&self) -> &[IntVector] {
        &self.equations
    }

    /// `Z^d` intersected with the linear span.
    pub fn lin(&self) -> &LatticeBasis {
        &self.lin
    }

    pub fn in_span(&self, v: &IntVector) -> bool {
        self.equations.iter().all(|e| e.dot(v).is_zero())
    }

    pub fn contains(&self, v: &IntVector) -> bool {
        self.in_span(v) && self.facets.iter().all(|f| !f.dot(v).is_negative())
    }

    pub fn relint_contains(&self, v: &IntVector) -> bool {
        self.in_span(v) && self.facets.iter().all(|f| f.dot(v).is_positive())
    }

    /// Sum of the rays, a lattice point of the relative interior.
    pub fn interior_vector(&self) -> IntVector {
        self.rays.iter().fold(IntVector::zero(self.ambient_dim), |acc, r| &acc + r)
    }

    /// `other` is a face of `self` (checked geometrically).
    pub fn has_face(&self, other: &Cone) -> bool {
        if !other.rays.iter().all(|r| self.rays.contains(r)) {
            return false;
        }
        self.face_lattice().faces.iter().any(|f| f == other)
    }

    pub fn face_lattice(&self) -> FaceLattice {
        let n = self.rays.len();
        let zero_sets: Vec<BTreeSet<usize>> = self
            .facets
            .iter()
            .map(|f| (0..n).filter(|&i| f.dot(&self.rays[i]).is_zero()).collect())
            .collect();
        let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        let mut queue = vec![(0..n).collect::<BTreeSet<usize>>()];
        while let Some(s) = queue.pop() {
            if !seen.insert(s.clone()) {
                continue;
            }
            for z in &zero_sets {
                let t: BTreeSet<usize> = s.intersection(z).copied().collect();
                if !seen.contains(&t) {
                    queue.push(t);
                }
            }
        }
        let mut faces: Vec<(Cone, BTreeSet<usize>)> = seen
            .into_iter()
            .map(|s| {
                let rays: Vec<IntVector> = s.iter().map(|&i| self.rays[i].clone()).collect();
                (Cone::new(self.ambient_dim, &rays).expect("face of a pointed cone"), s)
            })
            .collect();
        faces.sort_by(|a, b| (a.0.dim, &a.0.rays).cmp(&(b.0.dim, &b.0.rays)));
        let ray_sets: Vec<BTreeSet<usize>> = faces.iter().map(|f| f.1.clone()).collect();
        let order = (0..faces.len())
            .map(|i| (0..faces.len()).filter(|&j| ray_sets[j].is_subset(&ray_sets[i])).collect())
            .collect();
        FaceLattice {
            dims: faces.iter().map(|f| f.0.dim).collect(),
            faces: faces.into_iter().map(|f| f.0).collect(),
            order,
        }
    }
}

/// All faces of a cone, ordered by dimension and then rays.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    pub faces: Vec<Cone>,
    /// `order[i]` lists the faces contained in face `i` (including `i`).
    pub order: Vec<Vec<usize>>,
    pub dims: Vec<usize>,
}

/// A fan stored as the face-closed set of all its cones, sorted by dimension
/// and rays; index 0 is always the zero cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    ambient_dim: usize,
    cones: Vec<Cone>,
    maximal: Vec<usize>,
    faces: Vec<Vec<usize>>,
    cofaces: Vec<Vec<usize>>,
}

impl Fan {
    /// Face closure of the given cones, with the fan axioms checked on every
    /// pair of maximal cones.
    pub fn new(ambient_dim: usize, cones: &[Cone]) -> Result<Fan, PolyhedralError> {
        if cones.is_empty() {
            return Err(PolyhedralError::EmptyFan);
        }
        let mut all: BTreeMap<(usize, Vec<IntVector>), Cone> = BTreeMap::new();
        for c in cones {
            if c.ambient_dim != ambient_dim {
                return Err(PolyhedralError::DimensionMismatch {
                    vector: c.rays.first().cloned().unwrap_or_default(),
                    expected: ambient_dim,
                    found: c.ambient_dim,
                });
            }
            for f in c.face_lattice().faces {
                all.entry((f.dim, f.rays.clone())).or_insert(f);
            }
        }
        let list: Vec<Cone> = all.into_values().collect();
        let maximal: Vec<usize> = (0..list.len())
            .filter(|&i| {
                !list.iter().enumerate().any(|(j, c)| j != i && list[i].rays.iter().all(|r| c.rays.contains(r)))
            })
            .collect();
        for (a, &i) in maximal.iter().enumerate() {
            for &j in &maximal[a + 1..] {
                check_intersection(&list[i], &list[j])?;
            }
        }
        Ok(Self::assemble(ambient_dim, list))
    }

    fn assemble(ambient_dim: usize, cones: Vec<Cone>) -> Fan {
        let n = cones.len();
        let faces: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).filter(|&j| cones[j].rays.iter().all(|r| cones[i].rays.contains(r))).collect())
            .collect();
        let cofaces: Vec<Vec<usize>> = (0..n).map(|j| (0..n).filter(|&i| faces[i].contains(&j)).collect()).collect();
        let maximal = (0..n).filter(|&i| cofaces[i].len() == 1).collect();
        Fan { ambient_dim, cones, maximal, faces, cofaces }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cone(&self, i: usize) -> &Cone {
        &self.cones[i]
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn maximal(&self) -> &[usize] {
        &self.maximal
    }

    pub fn dim(&self) -> usize {
        self.cones.iter().map(Cone::dim).max().unwrap_or(0)
    }

    /// Faces of cone `i`, including `i` itself.
    pub fn faces_of(&self, i: usize) -> &[usize] {
        &self.faces[i]
    }

    /// Cones having cone `j` as a face, including `j` itself.
    pub fn cofaces_of(&self, j: usize) -> &[usize] {
        &self.cofaces[j]
    }

    /// Cone `j` is a face of cone `i`.
    pub fn is_face(&self, j: usize, i: usize) -> bool {
        self.faces[i].binary_search(&j).is_ok()
    }

    /// Facets of cone `i`.
    pub fn facets_of(&self, i: usize) -> Vec<usize> {
        let d = self.cones[i].dim;
        self.faces[i].iter().copied().filter(|&j| self.cones[j].dim + 1 == d).collect()
    }

    pub fn index_of(&self, cone: &Cone) -> Option<usize> {
        self.cones.iter().position(|c| c == cone)
    }

    /// The cone whose relative interior contains `x`, if `x` lies in the support.
    pub fn carrier(&self, x: &IntVector) -> Option<usize> {
        (0..self.cones.len()).find(|&i| self.cones[i].relint_contains(x))
    }

    pub fn in_support(&self, x: &IntVector) -> bool {
        self.maximal.iter().any(|&i| self.cones[i].contains(x))
    }

    /// The subfan on the given face-closed set of cone indices.
    pub fn subfan(&self, indices: &[usize]) -> Result<Fan, PolyhedralError> {
        let set: BTreeSet<usize> = indices.iter().copied().collect();
        for &i in &set {
            if !self.faces[i].iter().all(|j| set.contains(j)) {
                return Err(PolyhedralError::NotFaceClosed(Box::new(self.cones[i].clone())));
            }
        }
        if set.is_empty() {
            return Err(PolyhedralError::EmptyFan);
        }
        Ok(Self::assemble(self.ambient_dim, set.iter().map(|&i| self.cones[i].clone()).collect()))
    }

    /// Indices of the cones of this fan inside `sup`, which must contain it.
    pub fn embedding_into(&self, sup: &Fan) -> Option<Vec<usize>> {
        self.cones.iter().map(|c| sup.index_of(c)).collect()
    }

    /// All cones of dimension at most `i`.
    pub fn skeleton(&self, i: usize) -> Fan {
        let idx: Vec<usize> = (0..self.cones.len()).filter(|&j| self.cones[j].dim <= i).collect();
        self.subfan(&idx).expect("skeletons are face closed")
    }
}

fn check_intersection(c: &Cone, d: &Cone) -> Result<(), PolyhedralError> {
    let bad = || PolyhedralError::BadIntersection { first: Box::new(c.clone()), second: Box::new(d.clone()) };
    let amb = c.ambient_dim;
    let mut dual_gens: Vec<IntVector> = c.facets.iter().chain(&d.facets).cloned().collect();
    for e in c.equations.iter().chain(&d.equations) {
        dual_gens.push(e.clone());
        dual_gens.push(-e);
    }
    let dd = dual_description(amb, &dual_gens);
    let mut gens = dd.facets.clone();
    for e in &dd.equations {
        gens.push(e.clone());
        gens.push(-e);
    }
    let meet = Cone::new(amb, &gens).map_err(|_| bad())?;
    if c.has_face(&meet) && d.has_face(&meet) {
        Ok(())
    } else {
        Err(bad())
    }
}

/// Orientation of a cone: its first `dim` linearly independent rays.
pub fn orientation(c: &Cone) -> Vec<IntVector> {
    independent_prefix(&c.rays)
}

/// Incidence sign of the facet `facet` in `cone`: the sign of the
/// determinant of `(w, orientation(facet))` in the coordinates of
/// `orientation(cone)`, where `w` is the first ray of `cone` outside `facet`.
pub fn incidence_sign(cone: &Cone, facet: &Cone) -> i32 {
    let basis = orientation(cone);
    let w = cone
        .rays
        .iter()
        .find(|r| !facet.rays.contains(r))
        .expect("facet is a proper face")
        .clone();
    let mut cols = vec![w];
    cols.extend(orientation(facet));
    let coords: Vec<Vec<BigRational>> =
        cols.iter().map(|v| solve_rational(&basis, v).expect("facet lies in the span of the cone")).collect();
    det_sign(&coords)
}

/// The augmented cellular chain complex of a fan: one cell per cone, the
/// zero cone being the augmentation cell.
#[derive(Clone, Debug)]
pub struct CellComplex {
    by_dim: Vec<Vec<usize>>,
    incidence: BTreeMap<(usize, usize), i32>,
}

impl CellComplex {
    /// Builds incidences and verifies the diamond identity and `∂∘∂ = 0`.
    pub fn new(fan: &Fan) -> Result<CellComplex, PolyhedralError> {
        let mut by_dim = vec![Vec::new(); fan.dim() + 1];
        for (i, c) in fan.cones().iter().enumerate() {
            by_dim[c.dim].push(i);
        }
        let mut incidence = BTreeMap::new();
        for (i, c) in fan.cones().iter().enumerate() {
            for j in fan.facets_of(i) {
                let s = incidence_sign(c, fan.cone(j));
                if s == 0 {
                    return Err(PolyhedralError::IncidenceFailure(format!("zero sign for {c} over {}", fan.cone(j))));
                }
                incidence.insert((i, j), s);
            }
        }
        let cx = CellComplex { by_dim, incidence };
        cx.verify(fan)?;
        Ok(cx)
    }

    fn verify(&self, fan: &Fan) -> Result<(), PolyhedralError> {
        for (i, c) in fan.cones().iter().enumerate() {
            for &k in fan.faces_of(i) {
                if fan.cone(k).dim + 2 != c.dim {
                    continue;
                }
                let mids: Vec<usize> =
                    fan.facets_of(i).into_iter().filter(|&j| fan.is_face(k, j)).collect();
                if mids.len() != 2 {
                    return Err(PolyhedralError::IncidenceFailure(format!(
                        "{} cones between {} and {c}",
                        mids.len(),
                        fan.cone(k)
                    )));
                }
                let sum: i32 = mids.iter().map(|&j| self.incidence(i, j) * self.incidence(j, k)).sum();
                if sum != 0 {
                    return Err(PolyhedralError::IncidenceFailure(format!(
                        "diamond identity fails between {} and {c}",
                        fan.cone(k)
                    )));
                }
            }
        }
        for t in 2..self.by_dim.len() {
            if !self.boundary(t - 1).mul(&self.boundary(t)).is_zero() {
                return Err(PolyhedralError::IncidenceFailure(format!("boundary squared nonzero in degree {t}")));
            }
        }
        Ok(())
    }

    /// Cone indices of the cells coming from cones of dimension `t`.
    pub fn cells(&self, t: usize) -> &[usize] {
        self.by_dim.get(t).map_or(&[], Vec::as_slice)
    }

    pub fn top_dim(&self) -> usize {
        self.by_dim.len() - 1
    }

    /// Incidence of facet `j` in cone `i` (zero when not a facet).
    pub fn incidence(&self, i: usize, j: usize) -> i32 {
        self.incidence.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Boundary from cones of dimension `t` to cones of dimension `t - 1`;
    /// rows index the smaller cones.
    pub fn boundary(&self, t: usize) -> IntMatrix {
        let rows = if t == 0 { &[][..] } else { self.cells(t - 1) };
        let cols = self.cells(t);
        let mut m = IntMatrix::zeros(rows.len(), cols.len());
        for (a, &j) in rows.iter().enumerate() {
            for (b, &i) in cols.iter().enumerate() {
                let s = self.incidence(i, j);
                if s != 0 {
                    m.set(a, b, BigInt::from(s));
                }
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> IntVector {
        IntVector::from_i64(x)
    }

    fn cone(d: usize, gens: &[&[i64]]) -> Cone {
        Cone::new(d, &gens.iter().map(|g| v(g)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn quadrant() {
        let c = cone(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(c.dim(), 2);
        assert_eq!(c.facet_normals(), &[v(&[0, 1]), v(&[1, 0])]);
        assert!(c.relint_contains(&v(&[1, 1])));
        assert!(!c.relint_contains(&v(&[1, 0])));
        assert!(c.contains(&v(&[1, 0])));
    }

    #[test]
    fn cone_with_redundant_generator() {
        let c = cone(2, &[&[3, 0], &[3, 1], &[3, 3]]);
        assert_eq!(c.dim(), 2);
        assert_eq!(c.rays(), &[v(&[1, 0]), v(&[1, 1])]);
        assert_eq!(c.facet_normals(), &[v(&[0, 1]), v(&[1, -1])]);
        assert!(c.relint_contains(&v(&[3, 2])));
        let fl = c.face_lattice();
        assert_eq!(fl.faces.len(), 4);
        assert_eq!(fl.faces[1].rays(), &[v(&[1, 0])]);
        assert_eq!(fl.faces[2].rays(), &[v(&[1, 1])]);
    }

    #[test]
    fn zero_cone() {
        let z = Cone::zero(2);
        assert_eq!(z.dim(), 0);
        assert!(z.relint_contains(&v(&[0, 0])));
        assert!(!z.contains(&v(&[1, 0])));
        assert_eq!(z.face_lattice().faces.len(), 1);
    }

    #[test]
    fn lower_dimensional_cone() {
        let c = cone(3, &[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(c.dim(), 2);
        assert_eq!(c.equations().len(), 1);
        assert!(!c.contains(&v(&[1, 1, 1])));
        assert!(c.relint_contains(&v(&[1, 2, 0])));
        let ray = cone(3, &[&[2, 4, 0]]);
        assert_eq!(ray.rays(), &[v(&[1, 2, 0])]);
        assert_eq!(ray.facet_normals(), &[v(&[1, 2, 0])]);
    }

    #[test]
    fn non_pointed_rejected() {
        let err = Cone::new(1, &[v(&[1]), v(&[-1])]).unwrap_err();
        assert!(matches!(err, PolyhedralError::NotPointed { .. }));
        let half = Cone::new(2, &[v(&[1, 0]), v(&[-1, 0]), v(&[0, 1])]).unwrap_err();
        assert!(matches!(half, PolyhedralError::NotPointed { .. }));
    }

    #[test]
    fn square_cone_face_count() {
        let c = cone(3, &[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]);
        assert_eq!(c.face_lattice().faces.len(), 10);
        assert_eq!(c.facet_normals().len(), 4);
    }

    #[test]
    fn two_cone_fan() {
        let c = cone(2, &[&[3, 0], &[3, 1], &[3, 3]]);
        let c2 = cone(2, &[&[3, 3], &[0, 1]]);
        let fan = Fan::new(2, &[c, c2]).unwrap();
        assert_eq!(fan.len(), 6);
        assert_eq!(fan.maximal().len(), 2);
        let cx = CellComplex::new(&fan).unwrap();
        assert_eq!(cx.cells(1).len(), 3);
        assert_eq!(cx.cells(2).len(), 2);
        assert_eq!(fan.skeleton(1).len(), 4);
        assert_eq!(fan.skeleton(0).len(), 1);
    }

    #[test]
    fn overlapping_cones_rejected() {
        let a = cone(2, &[&[1, 0], &[0, 1]]);
        let b = cone(2, &[&[1, 1], &[-1, 1]]);
        assert!(matches!(Fan::new(2, &[a, b]), Err(PolyhedralError::BadIntersection { .. })));
    }

    #[test]
    fn opposite_rays() {
        let fan = Fan::new(1, &[cone(1, &[&[1]]), cone(1, &[&[-1]])]).unwrap();
        let cx = CellComplex::new(&fan).unwrap();
        assert_eq!(cx.incidence(1, 0), 1);
        assert_eq!(cx.incidence(2, 0), 1);
    }

    #[test]
    fn fan_rebuild_is_idempotent() {
        let a = cone(3, &[&[2, 0, 0], &[0, 2, 0]]);
        let b = cone(3, &[&[2, 0, 0], &[0, 0, 2]]);
        let c = cone(3, &[&[0, 2, 0], &[0, 0, 2]]);
        let fan = Fan::new(3, &[a, b, c]).unwrap();
        let again = Fan::new(3, fan.cones()).unwrap();
        assert_eq!(fan, again);
    }
}
