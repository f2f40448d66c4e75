//! Monoidal complexes on fans and their toric face rings.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use thiserror::Error;

use crate::lattice::IntVector;
use crate::monoid::{hilbert_basis_of_cone, AffineMonoid, MonoidCheck, MonoidError};
use crate::polyhedral::{Cone, Fan, PolyhedralError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error(transparent)]
    Polyhedral(#[from] PolyhedralError),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error("no monoid given for maximal cone {0}")]
    MissingMonoid(Box<Cone>),
    #[error("monoid given for {0}, which is not a maximal cone of the fan")]
    UnexpectedMonoid(Box<Cone>),
    #[error("generators given for {cone} span {spanned} instead")]
    ConeMismatch { cone: Box<Cone>, spanned: Box<Cone> },
    #[error("monoids on {face} disagree: {witness} lies in one restriction but not the other")]
    FaceMismatch { face: Box<Cone>, witness: IntVector },
    #[error("face axiom fails for {face} in {cone}: witness {witness}")]
    FaceAxiom { cone: Box<Cone>, face: Box<Cone>, witness: IntVector },
    #[error("subfan is not contained in the fan")]
    NotSubfan,
    #[error("presentation check failed in degree {degree}: {found} classes, expected {expected}")]
    Presentation { degree: IntVector, found: usize, expected: usize },
    #[error("presentation has {0} variables; at most 20 are supported")]
    TooManyVariables(usize),
}

/// A fan together with one affine monoid per cone, indexed like
/// [`Fan::cones`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidalComplex {
    fan: Fan,
    monoids: Vec<AffineMonoid>,
    stanley: bool,
    seminormal: bool,
    normal_monoids: bool,
    checks: Vec<(usize, MonoidCheck)>,
    seminormal_bound: Option<u64>,
}

impl MonoidalComplex {
    /// Builds the complex from generators of the maximal monoids (keyed by
    /// fan index), or from the lattice points of each cone when `stanley`.
    /// Face monoids are obtained by restriction and all axioms are verified.
    pub fn build(
        fan: Fan,
        maximal_gens: &BTreeMap<usize, Vec<IntVector>>,
        stanley: bool,
        seminormal_bound: Option<u64>,
    ) -> Result<MonoidalComplex, ComplexError> {
        let d = fan.ambient_dim();
        let mut monoids: Vec<Option<AffineMonoid>> = vec![None; fan.len()];
        if stanley {
            for (i, c) in fan.cones().iter().enumerate() {
                let hb = hilbert_basis_of_cone(c, c.lin());
                monoids[i] = Some(AffineMonoid::new(d, &hb.elements)?);
            }
        } else {
            for &i in maximal_gens.keys() {
                if !fan.maximal().contains(&i) {
                    return Err(ComplexError::UnexpectedMonoid(Box::new(fan.cone(i).clone())));
                }
            }
            for &i in fan.maximal() {
                let gens = maximal_gens.get(&i).ok_or_else(|| ComplexError::MissingMonoid(Box::new(fan.cone(i).clone())))?;
                let m = AffineMonoid::new(d, gens)?;
                if m.cone() != fan.cone(i) {
                    return Err(ComplexError::ConeMismatch { cone: Box::new(fan.cone(i).clone()), spanned: Box::new(m.cone().clone()) });
                }
                for &j in fan.faces_of(i) {
                    let r = m.restrict_to_face(fan.cone(j));
                    match &monoids[j] {
                        Some(existing) => {
                            if let Some(w) = difference_witness(existing, &r) {
                                return Err(ComplexError::FaceMismatch { face: Box::new(fan.cone(j).clone()), witness: w });
                            }
                        }
                        None => monoids[j] = Some(r),
                    }
                }
            }
        }
        let monoids: Vec<AffineMonoid> = monoids.into_iter().map(|m| m.expect("every cone is a face")).collect();
        Self::assemble(fan, monoids, stanley, seminormal_bound)
    }

    fn assemble(
        fan: Fan,
        monoids: Vec<AffineMonoid>,
        stanley: bool,
        seminormal_bound: Option<u64>,
    ) -> Result<MonoidalComplex, ComplexError> {
        validate_axioms(&fan, &monoids)?;
        // faces of seminormal (normal) monoids are seminormal (normal)
        let mut checks = Vec::new();
        for &i in fan.maximal() {
            checks.push((i, monoids[i].check(seminormal_bound)?));
        }
        Ok(MonoidalComplex {
            seminormal: checks.iter().all(|c| c.1.seminormal),
            normal_monoids: checks.iter().all(|c| c.1.normal),
            fan,
            monoids,
            stanley,
            checks,
            seminormal_bound,
        })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn ambient_dim(&self) -> usize {
        self.fan.ambient_dim()
    }

    pub fn dim(&self) -> usize {
        self.fan.dim()
    }

    pub fn monoid(&self, i: usize) -> &AffineMonoid {
        &self.monoids[i]
    }

    pub fn monoids(&self) -> &[AffineMonoid] {
        &self.monoids
    }

    pub fn is_stanley(&self) -> bool {
        self.stanley
    }

    pub fn is_seminormal(&self) -> bool {
        self.seminormal
    }

    pub fn has_normal_monoids(&self) -> bool {
        self.normal_monoids
    }

    /// Per maximal cone seminormality/normality checks.
    pub fn checks(&self) -> &[(usize, MonoidCheck)] {
        &self.checks
    }

    pub fn seminormal_bound(&self) -> Option<u64> {
        self.seminormal_bound
    }

    /// The complex induced on a subfan.
    pub fn restrict(&self, subfan: &Fan) -> Result<MonoidalComplex, ComplexError> {
        let idx = subfan.embedding_into(&self.fan).ok_or(ComplexError::NotSubfan)?;
        let monoids = idx.iter().map(|&i| self.monoids[i].clone()).collect();
        Self::assemble(subfan.clone(), monoids, self.stanley, self.seminormal_bound)
    }

    /// The complex on the cones with the given (face closed) indices.
    pub fn restrict_to(&self, indices: &[usize]) -> Result<MonoidalComplex, ComplexError> {
        let sub = self.fan.subfan(indices)?;
        self.restrict(&sub)
    }

    /// Cones whose monoid contains `a`; empty iff `a ∉ |M|`.
    pub fn carrier(&self, a: &IntVector) -> Vec<usize> {
        match self.fan.carrier(a) {
            Some(f) if self.monoids[f].contains(a) => self.fan.cofaces_of(f).to_vec(),
            _ => Vec::new(),
        }
    }

    /// Dimension (0 or 1) of the degree `a` part of the toric face ring.
    pub fn graded_dim(&self, a: &IntVector) -> usize {
        usize::from(!self.carrier(a).is_empty())
    }

    /// `a` lies in the normalization `M̄_D` of the monoid on cone `i`.
    pub fn in_normalized(&self, i: usize, a: &IntVector) -> bool {
        self.monoids[i].in_normalization(a)
    }

    /// Cone-wise seminormalization.
    pub fn seminormalize(&self) -> Result<MonoidalComplex, ComplexError> {
        let mut gens = BTreeMap::new();
        for &i in self.fan.maximal() {
            let s = self.monoids[i].seminormalize(self.seminormal_bound)?;
            gens.insert(i, s.monoid.generators().to_vec());
        }
        if self.stanley {
            return Ok(self.clone());
        }
        let out = Self::build(self.fan.clone(), &gens, false, self.seminormal_bound)?;
        assert!(out.seminormal, "seminormalization is not seminormal");
        Ok(out)
    }

    /// Same fan and equal monoids on every cone.
    pub fn same_complex(&self, other: &MonoidalComplex) -> bool {
        self.fan == other.fan && self.monoids.iter().zip(&other.monoids).all(|(a, b)| a.same_monoid(b))
    }

    /// The ordered list of ring generators: all maximal monoid generators.
    pub fn ring_generators(&self) -> Vec<IntVector> {
        let set: BTreeSet<IntVector> =
            self.fan.maximal().iter().flat_map(|&i| self.monoids[i].generators().iter().cloned()).collect();
        set.into_iter().collect()
    }

    /// A presentation `S/I` of the toric face ring, with generators found and
    /// verified through total degree `degree_bound`.
    pub fn presentation(&self, degree_bound: u32) -> Result<PresentationIdeal, ComplexError> {
        Presenter::new(self)?.run(degree_bound)
    }
}

fn difference_witness(a: &AffineMonoid, b: &AffineMonoid) -> Option<IntVector> {
    a.generators()
        .iter()
        .find(|g| !b.contains(g))
        .or_else(|| b.generators().iter().find(|g| !a.contains(g)))
        .cloned()
}

fn validate_axioms(fan: &Fan, monoids: &[AffineMonoid]) -> Result<(), ComplexError> {
    for (i, c) in fan.cones().iter().enumerate() {
        let m = &monoids[i];
        if m.cone() != c {
            return Err(ComplexError::ConeMismatch { cone: Box::new(c.clone()), spanned: Box::new(m.cone().clone()) });
        }
        for &j in fan.faces_of(i) {
            let face = fan.cone(j);
            if let Some(w) = difference_witness(&m.restrict_to_face(face), &monoids[j]) {
                return Err(ComplexError::FaceAxiom { cone: Box::new(c.clone()), face: Box::new(face.clone()), witness: w });
            }
        }
    }
    Ok(())
}

type Monomial = Vec<u32>;

/// Generators of the presentation ideal: squarefree monomials for the
/// non-faces and binomials per maximal cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationIdeal {
    /// The vector `a_i` of the variable `X_i`.
    pub variables: Vec<IntVector>,
    pub monomials: Vec<Monomial>,
    /// Pairs `(u, v)` standing for `X^u - X^v`.
    pub binomials: Vec<(Monomial, Monomial)>,
    pub degree_bound: u32,
    /// Number of multidegrees checked during verification.
    pub verified_degrees: usize,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }
}

struct Presenter<'a> {
    mc: &'a MonoidalComplex,
    vars: Vec<IntVector>,
    /// For each maximal cone, the variables lying in it.
    cone_vars: Vec<BTreeSet<usize>>,
}

impl<'a> Presenter<'a> {
    fn new(mc: &'a MonoidalComplex) -> Result<Self, ComplexError> {
        let vars = mc.ring_generators();
        if vars.len() > 20 {
            return Err(ComplexError::TooManyVariables(vars.len()));
        }
        let cone_vars = mc
            .fan
            .maximal()
            .iter()
            .map(|&i| (0..vars.len()).filter(|&k| mc.fan.cone(i).contains(&vars[k])).collect())
            .collect();
        Ok(Presenter { mc, vars, cone_vars })
    }

    fn support(m: &Monomial) -> BTreeSet<usize> {
        (0..m.len()).filter(|&i| m[i] > 0).collect()
    }

    fn is_face(&self, s: &BTreeSet<usize>) -> bool {
        self.cone_vars.iter().any(|c| s.is_subset(c))
    }

    /// Degree of `X^m` in the ring, `None` when the monomial is zero.
    fn evaluate(&self, m: &Monomial) -> Option<IntVector> {
        if !self.is_face(&Self::support(m)) {
            return None;
        }
        let d = self.mc.ambient_dim();
        Some(m.iter().zip(&self.vars).fold(IntVector::zero(d), |acc, (&e, v)| &acc + &v.scale_i64(i64::from(e))))
    }

    fn monomials_up_to(vars: &[usize], n: usize, bound: u32) -> Vec<Monomial> {
        let mut out = vec![vec![0; n]];
        for &k in vars {
            let mut next = Vec::new();
            for m in &out {
                let total: u32 = m.iter().sum();
                for e in 0..=(bound - total) {
                    let mut m2 = m.clone();
                    m2[k] = e;
                    next.push(m2);
                }
            }
            out = next;
        }
        out
    }

    fn apply_moves(
        m: &Monomial,
        binomials: &[(Monomial, Monomial)],
        allowed: &BTreeSet<usize>,
        bound: u32,
    ) -> Vec<Monomial> {
        let mut out = Vec::new();
        for (u, v) in binomials {
            for (p, q) in [(u, v), (v, u)] {
                let usable = Self::support(p).is_subset(allowed) && Self::support(q).is_subset(allowed);
                if !usable || p.iter().zip(m).any(|(a, b)| a > b) {
                    continue;
                }
                let r: Monomial = (0..m.len()).map(|i| m[i] - p[i] + q[i]).collect();
                if r.iter().sum::<u32>() <= bound {
                    out.push(r);
                }
            }
        }
        out
    }

    fn run(&self, bound: u32) -> Result<PresentationIdeal, ComplexError> {
        let n = self.vars.len();
        let mut binomials: Vec<(Monomial, Monomial)> = Vec::new();
        for (c, allowed) in self.mc.fan.maximal().iter().zip(&self.cone_vars) {
            let grading = self.mc.monoids[*c].grading();
            let vars: Vec<usize> = allowed.iter().copied().collect();
            let mons = Self::monomials_up_to(&vars, n, bound);
            let mut fibers: BTreeMap<(BigInt, IntVector), Vec<Monomial>> = BTreeMap::new();
            for m in mons {
                let e = self.evaluate(&m).expect("monomial supported in a cone");
                fibers.entry((grading.dot(&e), e)).or_default().push(m);
            }
            for fiber in fibers.values_mut() {
                fiber.sort_by(monomial_order);
                let index: HashMap<&Monomial, usize> = fiber.iter().enumerate().map(|(i, m)| (m, i)).collect();
                let mut uf = UnionFind::new(fiber.len());
                for (i, m) in fiber.iter().enumerate() {
                    for r in Self::apply_moves(m, &binomials, allowed, bound) {
                        if let Some(&j) = index.get(&r) {
                            uf.union(i, j);
                        }
                    }
                }
                let mut reps: Vec<usize> = Vec::new();
                for i in 0..fiber.len() {
                    if uf.find(i) == i {
                        reps.push(i);
                    }
                }
                for &r in &reps[1..] {
                    binomials.push(orient(fiber[reps[0]].clone(), fiber[r].clone()));
                }
            }
        }

        let mut nonfaces: Vec<Monomial> = Vec::new();
        for mask in 1u32..(1 << n) {
            let s: BTreeSet<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            if self.is_face(&s) {
                continue;
            }
            let minimal = s.iter().all(|&i| {
                let mut t = s.clone();
                t.remove(&i);
                self.is_face(&t)
            });
            if minimal {
                nonfaces.push((0..n).map(|i| u32::from(s.contains(&i))).collect());
            }
        }
        nonfaces.sort_by(monomial_order);

        let universe = Self::monomials_up_to(&(0..n).collect::<Vec<_>>(), n, bound);
        let index: HashMap<&Monomial, usize> = universe.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let all_vars: BTreeSet<usize> = (0..n).collect();
        let mut uf = UnionFind::new(universe.len());
        for (i, m) in universe.iter().enumerate() {
            for r in Self::apply_moves(m, &binomials, &all_vars, bound) {
                if let Some(&j) = index.get(&r) {
                    uf.union(i, j);
                }
            }
        }
        let mut monomials: Vec<Monomial> = Vec::new();
        for g in nonfaces {
            let divides = |k: &Monomial, m: &Monomial| k.iter().zip(m).all(|(a, b)| a <= b);
            let Some(&gi) = index.get(&g) else {
                monomials.push(g);
                continue;
            };
            let root = uf.find(gi);
            let implied = (0..universe.len())
                .any(|j| uf.find(j) == root && monomials.iter().any(|k| divides(k, &universe[j])));
            if !implied {
                monomials.push(g);
            }
        }

        let verified_degrees = self.verify(&universe, &mut uf, &monomials)?;
        binomials.sort();
        Ok(PresentationIdeal { variables: self.vars.clone(), monomials, binomials, degree_bound: bound, verified_degrees })
    }

    /// Per multidegree, the classes of monomials not killed by the monomial
    /// generators must number exactly the graded dimension.
    fn verify(&self, universe: &[Monomial], uf: &mut UnionFind, monomials: &[Monomial]) -> Result<usize, ComplexError> {
        let divides = |k: &Monomial, m: &Monomial| k.iter().zip(m).all(|(a, b)| a <= b);
        let mut killed: BTreeSet<usize> = BTreeSet::new();
        for (j, m) in universe.iter().enumerate() {
            if monomials.iter().any(|k| divides(k, m)) {
                killed.insert(uf.find(j));
            }
        }
        let mut classes: BTreeMap<IntVector, BTreeSet<usize>> = BTreeMap::new();
        let zero_degree = IntVector::zero(self.mc.ambient_dim());
        for (j, m) in universe.iter().enumerate() {
            let root = uf.find(j);
            match self.evaluate(m) {
                Some(a) => {
                    if killed.contains(&root) {
                        return Err(ComplexError::Presentation { degree: a, found: 0, expected: 1 });
                    }
                    classes.entry(a).or_default().insert(root);
                }
                None => {
                    if !killed.contains(&root) {
                        return Err(ComplexError::Presentation { degree: zero_degree, found: 1, expected: 0 });
                    }
                }
            }
        }
        for (a, roots) in &classes {
            let expected = self.mc.graded_dim(a);
            if roots.len() != expected {
                return Err(ComplexError::Presentation { degree: a.clone(), found: roots.len(), expected });
            }
        }
        Ok(classes.len())
    }
}

/// Total degree first, then reverse lexicographic on exponents so that
/// `X1` sorts before `X2`.
fn monomial_order(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    let (ta, tb): (u32, u32) = (a.iter().sum(), b.iter().sum());
    ta.cmp(&tb).then_with(|| b.cmp(a))
}

fn orient(u: Monomial, v: Monomial) -> (Monomial, Monomial) {
    if u >= v { (u, v) } else { (v, u) }
}
