//! Graded local cohomology of seminormal toric face rings through stars.
//!
//! For a degree `a` the star `st(-a)` is the up-closed set of cones `D` with
//! `-a` in the normalization of `M_D`. Its cells span a subcomplex of the
//! cellular cochain complex of the fan; the cohomology of that piece in
//! cone-dimension `i` is `H^i_m(R)_a` for seminormal complexes. Non-seminormal
//! complexes add the contribution of the restriction to the complementary
//! subfan, recursively.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::cech;
use crate::lattice::{coset_representatives, intersect, prime_factors, snf, IntMatrix, IntVector, LatticeBasis};
use crate::moncomplex::{ComplexError, MonoidalComplex};
use crate::monoid::AffineMonoid;
use crate::polyhedral::{CellComplex, Cone, Fan};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("the complex is not seminormal; use per-degree computation instead")]
    NotSeminormal,
    #[error("the monoid is not seminormal")]
    MonoidNotSeminormal,
    #[error("the complex is not a Stanley complex")]
    NotStanley,
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Field characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Characteristic {
    Zero,
    Prime(u64),
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Characteristic::Zero => write!(f, "0"),
            Characteristic::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// Cohomology dimensions over `Q`, plus the dimensions over `F_p` for every
/// prime `p` at which they differ. Over any other prime they agree with `Q`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CohomologyTable {
    pub rational: Vec<usize>,
    pub modular: BTreeMap<u64, Vec<usize>>,
}

impl CohomologyTable {
    pub fn zero(len: usize) -> Self {
        CohomologyTable { rational: vec![0; len], modular: BTreeMap::new() }
    }

    pub fn dims(&self, ch: Characteristic) -> Vec<usize> {
        match ch {
            Characteristic::Zero => self.rational.clone(),
            Characteristic::Prime(p) => self.modular.get(&p).cloned().unwrap_or_else(|| self.rational.clone()),
        }
    }

    pub fn bad_primes(&self) -> Vec<u64> {
        self.modular.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rational.iter().all(|&d| d == 0) && self.modular.values().all(|v| v.iter().all(|&d| d == 0))
    }

    pub fn len(&self) -> usize {
        self.rational.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rational.is_empty()
    }

    /// Pads (or truncates trailing zeros) to exactly `len` entries.
    pub fn resized(mut self, len: usize) -> Self {
        for v in std::iter::once(&mut self.rational).chain(self.modular.values_mut()) {
            assert!(v.iter().skip(len).all(|&d| d == 0), "nonzero cohomology beyond requested length");
            v.resize(len, 0);
        }
        self
    }

    /// Entrywise sum.
    pub fn add(&self, other: &CohomologyTable) -> CohomologyTable {
        let len = self.len().max(other.len());
        let sum = |a: &[usize], b: &[usize]| -> Vec<usize> {
            (0..len).map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)).collect()
        };
        let primes: BTreeSet<u64> = self.modular.keys().chain(other.modular.keys()).copied().collect();
        let modular = primes
            .into_iter()
            .map(|p| {
                let a = self.dims(Characteristic::Prime(p));
                let b = other.dims(Characteristic::Prime(p));
                (p, sum(&a, &b))
            })
            .collect();
        CohomologyTable { rational: sum(&self.rational, &other.rational), modular }
    }
}

/// A cochain complex of free abelian groups `K^0 -> K^1 -> ...`; `maps[t]`
/// has shape `ranks[t + 1] x ranks[t]`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub ranks: Vec<usize>,
    pub maps: Vec<IntMatrix>,
}

impl CochainComplex {
    pub fn new(ranks: Vec<usize>, maps: Vec<IntMatrix>) -> Self {
        assert_eq!(maps.len() + 1, ranks.len().max(1));
        for (t, m) in maps.iter().enumerate() {
            assert_eq!((m.rows(), m.cols()), (ranks[t + 1], ranks[t]), "differential shape");
        }
        CochainComplex { ranks, maps }
    }

    pub fn is_complex(&self) -> bool {
        self.maps.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }

    /// Dimensions over `Q` and over every prime dividing an elementary divisor.
    pub fn cohomology(&self) -> CohomologyTable {
        let divisors: Vec<Vec<BigInt>> = self.maps.iter().map(|m| snf(m).divisors).collect();
        let rank_at = |t: isize, p: Option<u64>| -> usize {
            if t < 0 || t as usize >= divisors.len() {
                return 0;
            }
            let ds = &divisors[t as usize];
            match p {
                None => ds.len(),
                Some(p) => ds.iter().filter(|d| !(*d % BigInt::from(p)).is_zero()).count(),
            }
        };
        let dims = |p: Option<u64>| -> Vec<usize> {
            (0..self.ranks.len())
                .map(|t| self.ranks[t] - rank_at(t as isize, p) - rank_at(t as isize - 1, p))
                .collect()
        };
        let primes: BTreeSet<u64> = divisors.iter().flatten().flat_map(prime_factors).collect();
        CohomologyTable { rational: dims(None), modular: primes.into_iter().map(|p| (p, dims(Some(p)))).collect() }
    }
}

/// Fan data reused across degrees: the cell complex and per-cone lattices.
pub struct StarContext<'a> {
    pub mc: &'a MonoidalComplex,
    pub cells: CellComplex,
}

impl<'a> StarContext<'a> {
    pub fn new(mc: &'a MonoidalComplex) -> Self {
        let cells = CellComplex::new(mc.fan()).expect("fan incidence verified at construction");
        StarContext { mc, cells }
    }

    /// Cones `D` with `x ∈ M̄_D`, i.e. `x ∈ D` and `x ∈ ZM_D`.
    pub fn star(&self, x: &IntVector) -> Vec<usize> {
        let fan = self.mc.fan();
        let Some(carrier) = fan.carrier(x) else { return Vec::new() };
        fan.cofaces_of(carrier).iter().copied().filter(|&d| self.mc.monoid(d).group().contains(x)).collect()
    }

    /// The cochain complex spanned by the cells of an up-closed cone set,
    /// graded by cone dimension.
    pub fn star_complex(&self, star: &[usize]) -> CochainComplex {
        let fan = self.mc.fan();
        let top = fan.dim();
        let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
        for &c in star {
            by_dim[fan.cone(c).dim()].push(c);
        }
        let ranks = by_dim.iter().map(Vec::len).collect();
        let maps = (0..top)
            .map(|t| {
                let mut m = IntMatrix::zeros(by_dim[t + 1].len(), by_dim[t].len());
                for (r, &big) in by_dim[t + 1].iter().enumerate() {
                    for (c, &small) in by_dim[t].iter().enumerate() {
                        let s = self.cells.incidence(big, small);
                        if s != 0 {
                            m.set(r, c, BigInt::from(s));
                        }
                    }
                }
                m
            })
            .collect();
        CochainComplex::new(ranks, maps)
    }

    /// `H̃^{i-1}(Γ_star)` at index `i`, for `i = 0..=dim Σ`.
    pub fn star_cohomology(&self, star: &[usize]) -> CohomologyTable {
        let cx = self.star_complex(star);
        debug_assert!(cx.is_complex());
        cx.cohomology()
    }

    /// `H^i_m(R)_a` via the star formula, recursing into `R_{Σ(-a)}` for
    /// non-seminormal complexes.
    pub fn local_cohomology_degree(&self, a: &IntVector) -> DegreeCohomology {
        let len = self.mc.dim() + 1;
        let minus = -a;
        let star = self.star(&minus);
        let star_table = self.star_cohomology(&star);
        let fan = self.mc.fan();
        let step = |oracle: Option<CohomologyTable>| FormulaStep {
            maximal: fan.maximal().iter().map(|&i| fan.cone(i).clone()).collect(),
            star: star.iter().map(|&i| fan.cone(i).clone()).collect(),
            star_table: star_table.clone(),
            oracle_table: oracle,
        };
        if self.mc.is_seminormal() {
            return DegreeCohomology { table: star_table.clone().resized(len), oracle_computed: false, steps: vec![step(None)] };
        }
        if star.is_empty() {
            let oracle = cech::cech_degree(self.mc, &self.cells, a).table;
            return DegreeCohomology {
                table: oracle.clone().resized(len),
                oracle_computed: true,
                steps: vec![step(Some(oracle))],
            };
        }
        let star_set: BTreeSet<usize> = star.iter().copied().collect();
        let rest: Vec<usize> = (0..fan.len()).filter(|i| !star_set.contains(i)).collect();
        let mut steps = vec![step(None)];
        let mut table = star_table.clone().resized(len);
        let mut oracle_computed = false;
        if !rest.is_empty() {
            let sub = self.mc.restrict_to(&rest).expect("complement of a star is a subfan");
            let inner = StarContext::new(&sub).local_cohomology_degree(a);
            table = table.add(&inner.table.resized(len));
            oracle_computed = inner.oracle_computed;
            steps.extend(inner.steps);
        }
        DegreeCohomology { table, oracle_computed, steps }
    }

    /// Finite partition of the degrees `x = -a` into classes with constant star.
    pub fn star_classes(&self) -> Vec<StarClass> {
        let fan = self.mc.fan();
        let d = fan.ambient_dim();
        let mut out = Vec::new();
        for (i, cone) in fan.cones().iter().enumerate() {
            let lattice = class_lattice(self.mc, i);
            let reps = coset_representatives(&lattice, cone.lin()).expect("class lattice has full rank");
            let sigma =
                self.mc.monoid(i).generators().iter().fold(IntVector::zero(d), |acc, g| &acc + g);
            let count = reps.len();
            for b in reps {
                let rep = push_into_relint(cone, &b, &sigma);
                let star = self.star(&rep);
                for probe in probes(cone, &rep, &sigma, &lattice) {
                    assert_eq!(self.star(&probe), star, "star not constant on class of {rep} (probe {probe})");
                }
                out.push(StarClass {
                    carrier: Some(i),
                    coset_rep: rep,
                    star,
                    class_lattice: lattice.clone(),
                    class_count_within_carrier: count,
                });
            }
        }
        out.push(StarClass {
            carrier: None,
            coset_rep: IntVector::zero(d),
            star: Vec::new(),
            class_lattice: LatticeBasis::zero(d),
            class_count_within_carrier: 1,
        });
        out
    }

    /// Index into `classes` of the class containing `x`.
    pub fn class_of(&self, classes: &[StarClass], x: &IntVector) -> usize {
        let carrier = self.mc.fan().carrier(x);
        classes
            .iter()
            .position(|c| match (c.carrier, carrier) {
                (None, None) => true,
                (Some(a), Some(b)) => a == b && c.class_lattice.contains(&(x - &c.coset_rep)),
                _ => false,
            })
            .expect("classes cover every degree")
    }
}

/// `K_C = ⋂_{D ⊇ C} (ZM_D ∩ lin C)`.
pub fn class_lattice(mc: &MonoidalComplex, i: usize) -> LatticeBasis {
    let fan = mc.fan();
    let lin = fan.cone(i).lin();
    fan.cofaces_of(i).iter().fold(lin.clone(), |acc, &d| intersect(&acc, &intersect(mc.monoid(d).group(), lin)))
}

fn push_into_relint(cone: &Cone, b: &IntVector, sigma: &IntVector) -> IntVector {
    let mut m = BigInt::zero();
    for f in cone.facet_normals() {
        let (fb, fs) = (f.dot(b), f.dot(sigma));
        if !fb.is_positive() {
            let need = (-fb) / &fs + 1;
            m = m.max(need);
        }
    }
    b + &sigma.scale(&m)
}

/// Further lattice points of the class of `rep`, deterministic.
fn probes(cone: &Cone, rep: &IntVector, sigma: &IntVector, lattice: &LatticeBasis) -> Vec<IntVector> {
    let mut out: Vec<IntVector> = (1..=3).map(|k| rep + &sigma.scale_i64(k)).collect();
    for v in lattice.basis() {
        out.push(push_into_relint(cone, &(rep + v), sigma));
        out.push(push_into_relint(cone, &(rep - v), sigma));
    }
    out
}

/// Degrees `x` (standing for `a = -x`) sharing a star: the lattice points of
/// `relint C` in one coset of `K_C`, or every point outside the support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarClass {
    /// Carrier cone index; `None` for the exterior class.
    pub carrier: Option<usize>,
    pub coset_rep: IntVector,
    pub star: Vec<usize>,
    pub class_lattice: LatticeBasis,
    pub class_count_within_carrier: usize,
}

/// One level of the per-degree formula.
#[derive(Clone, Debug)]
pub struct FormulaStep {
    pub maximal: Vec<Cone>,
    pub star: Vec<Cone>,
    pub star_table: CohomologyTable,
    /// Set when the star was empty on a non-seminormal level.
    pub oracle_table: Option<CohomologyTable>,
}

#[derive(Clone, Debug)]
pub struct DegreeCohomology {
    pub table: CohomologyTable,
    pub oracle_computed: bool,
    pub steps: Vec<FormulaStep>,
}

pub fn star(mc: &MonoidalComplex, x: &IntVector) -> Vec<usize> {
    StarContext::new(mc).star(x)
}

pub fn local_cohomology_degree(mc: &MonoidalComplex, a: &IntVector) -> DegreeCohomology {
    StarContext::new(mc).local_cohomology_degree(a)
}

pub fn star_classes(mc: &MonoidalComplex) -> Vec<StarClass> {
    StarContext::new(mc).star_classes()
}

#[derive(Clone, Debug)]
pub struct CohomologyReport {
    pub classes: Vec<(StarClass, CohomologyTable)>,
}

impl CohomologyReport {
    /// Every class with an empty star has vanishing cohomology.
    pub fn vanishing_holds(&self) -> bool {
        self.classes.iter().filter(|(c, _)| c.star.is_empty()).all(|(_, t)| t.is_zero())
    }

    /// `H^i = 0` for all `i < n` in every class.
    pub fn vanishes_below(&self, n: usize, ch: Characteristic) -> bool {
        self.classes.iter().all(|(_, t)| t.dims(ch).iter().take(n).all(|&d| d == 0))
    }
}

/// Cohomology of every star class of a seminormal complex.
pub fn cohomology_report(mc: &MonoidalComplex) -> Result<CohomologyReport, CohomologyError> {
    if !mc.is_seminormal() {
        return Err(CohomologyError::NotSeminormal);
    }
    let ctx = StarContext::new(mc);
    let len = mc.dim() + 1;
    let classes = ctx
        .star_classes()
        .into_iter()
        .map(|c| {
            let t = ctx.star_cohomology(&c.star).resized(len);
            (c, t)
        })
        .collect();
    Ok(CohomologyReport { classes })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthReport {
    pub depth: usize,
    pub dim: usize,
    pub is_cm: bool,
    pub m_k: usize,
    /// Cohen–Macaulayness of the skeleton of each dimension `0..=dim`.
    pub skeleton_cm: Vec<bool>,
}

/// Depth through rank selection: the largest `i` such that all skeletons of
/// dimension at most `i` are Cohen–Macaulay.
pub fn depth(mc: &MonoidalComplex, ch: Characteristic) -> Result<DepthReport, CohomologyError> {
    if !mc.is_seminormal() {
        return Err(CohomologyError::NotSeminormal);
    }
    let dim = mc.dim();
    let mut skeleton_cm = Vec::with_capacity(dim + 1);
    for i in 0..=dim {
        let sk = mc.restrict(&mc.fan().skeleton(i))?;
        let report = cohomology_report(&sk)?;
        skeleton_cm.push(report.vanishes_below(sk.dim(), ch));
    }
    let m_k = skeleton_cm.iter().take_while(|&&b| b).count().saturating_sub(1);
    Ok(DepthReport { depth: m_k, dim, is_cm: m_k == dim, m_k, skeleton_cm })
}

fn single_cone_complex(m: &AffineMonoid) -> MonoidalComplex {
    let fan = Fan::new(m.ambient_dim(), std::slice::from_ref(m.cone())).expect("a cone forms a fan");
    let top = fan.maximal()[0];
    let gens = BTreeMap::from([(top, m.generators().to_vec())]);
    MonoidalComplex::build(fan, &gens, false, None).expect("face poset of a monoid is a monoidal complex")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CkReport {
    pub c_k: usize,
    pub m_k: usize,
}

/// `c_k(M)`: the largest `t` with `k[M ∩ F]` Cohen–Macaulay for every face
/// `F` of dimension at most `t`; reported together with `m_k` of the face
/// poset complex, which is never smaller.
pub fn c_k_monoid(m: &AffineMonoid, ch: Characteristic) -> Result<CkReport, CohomologyError> {
    let whole = single_cone_complex(m);
    if !whole.is_seminormal() {
        return Err(CohomologyError::MonoidNotSeminormal);
    }
    let faces = m.cone().face_lattice();
    let mut face_cm: BTreeMap<usize, bool> = BTreeMap::new();
    for f in &faces.faces {
        let cx = single_cone_complex(&m.restrict_to_face(f));
        let ok = depth(&cx, ch)?.is_cm;
        *face_cm.entry(f.dim()).or_insert(true) &= ok;
    }
    let c_k = (0..=m.rank()).take_while(|t| face_cm.get(t).copied().unwrap_or(true)).count().saturating_sub(1);
    let m_k = depth(&whole, ch)?.m_k;
    assert!(m_k >= c_k, "m_k < c_k for {m:?}");
    Ok(CkReport { c_k, m_k })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BbrEntry {
    pub cone: usize,
    /// `H̃^{i - dim C - 1}(Δ(st(C) \ {C}))` at index `i`.
    pub order_complex: CohomologyTable,
    /// `H̃^{i-1}(Γ_{st(C)})` at index `i`.
    pub star_complex: CohomologyTable,
}

/// For a Stanley complex: per cone, the cohomology of the order complex of
/// its open star against that of the star cells, which must agree.
pub fn bbr_formula(mc: &MonoidalComplex) -> Result<Vec<BbrEntry>, CohomologyError> {
    if !mc.is_stanley() {
        return Err(CohomologyError::NotStanley);
    }
    let ctx = StarContext::new(mc);
    let fan = mc.fan();
    let len = mc.dim() + 1;
    let classes = ctx.star_classes();
    let mut out = Vec::new();
    for i in 0..fan.len() {
        let st = fan.cofaces_of(i).to_vec();
        let cls: Vec<&StarClass> = classes.iter().filter(|c| c.carrier == Some(i)).collect();
        assert!(cls.len() == 1 && cls[0].star == st, "Stanley classes are the open stars");
        let star_table = ctx.star_cohomology(&st).resized(len);
        let above: Vec<usize> = st.iter().copied().filter(|&j| j != i).collect();
        let raw = order_complex(fan, &above).cohomology();
        // raw index k is H̃^{k-1}; shift so that index i holds H̃^{i - dim C - 1}
        let shift = fan.cone(i).dim();
        let place = |v: &[usize]| -> Vec<usize> {
            (0..len).map(|k| if k >= shift { v.get(k - shift).copied().unwrap_or(0) } else { 0 }).collect()
        };
        let order_table = CohomologyTable {
            rational: place(&raw.rational),
            modular: raw.modular.iter().map(|(p, v)| (*p, place(v))).collect(),
        };
        assert_eq!(order_table, star_table, "order complex and star cells disagree at {}", fan.cone(i));
        out.push(BbrEntry { cone: i, order_complex: order_table, star_complex: star_table });
    }
    Ok(out)
}

/// Augmented simplicial cochain complex of the chains of a set of cones
/// under inclusion; `K^k` is spanned by chains with `k` elements.
pub fn order_complex(fan: &Fan, elements: &[usize]) -> CochainComplex {
    let mut chains: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new()]];
    loop {
        let last = chains.last().expect("nonempty");
        let mut next = Vec::new();
        for ch in last {
            for &e in elements {
                let extends = ch.last().is_none_or(|&top| top != e && fan.is_face(top, e));
                if extends {
                    let mut c = ch.clone();
                    c.push(e);
                    next.push(c);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        chains.push(next);
    }
    let ranks: Vec<usize> = chains.iter().map(Vec::len).collect();
    let maps = (0..chains.len() - 1)
        .map(|k| {
            let index: BTreeMap<&Vec<usize>, usize> = chains[k].iter().enumerate().map(|(i, c)| (c, i)).collect();
            let mut m = IntMatrix::zeros(chains[k + 1].len(), chains[k].len());
            for (r, tau) in chains[k + 1].iter().enumerate() {
                for drop in 0..tau.len() {
                    let mut sigma = tau.clone();
                    sigma.remove(drop);
                    let c = index[&sigma];
                    m.set(r, c, BigInt::from(if drop % 2 == 0 { 1 } else { -1 }));
                }
            }
            m
        })
        .collect();
    CochainComplex::new(ranks, maps)
}
