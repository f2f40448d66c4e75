//! Exact integer linear algebra.
//!
//! Everything here works over arbitrary-precision integers: vectors and
//! matrices over `Z`, Smith and Hermite normal forms with their unimodular
//! transforms, sublattices of `Z^d` given by bases, membership, intersection
//! and quotient invariants. A few rational helpers (rank, solving in a span,
//! determinant signs) sit at the bottom because the polyhedral code needs them.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector {vector} of the sublattice is not contained in the superlattice")]
    NotSublattice { vector: IntVector },
    #[error("lattices have different ranks ({sub} vs {sup})")]
    RankMismatch { sub: usize, sup: usize },
}

/// A point of `Z^d`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IntVector(Vec<BigInt>);

impl IntVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntVector(entries)
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        IntVector(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        IntVector(vec![BigInt::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = BigInt::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, k: &BigInt) -> IntVector {
        IntVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn scale_i64(&self, k: i64) -> IntVector {
        self.scale(&BigInt::from(k))
    }

    /// Non-negative gcd of the entries; zero for the zero vector.
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    /// The vector divided by its content.
    pub fn primitive(&self) -> IntVector {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        IntVector(self.0.iter().map(|x| x / &g).collect())
    }

    /// `self` is `k * other` for a positive rational `k`.
    pub fn positively_parallel(&self, other: &IntVector) -> bool {
        !self.is_zero() && !other.is_zero() && self.primitive() == other.primitive()
    }

    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl Index<usize> for IntVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl Add for &IntVector {
    type Output = IntVector;
    fn add(self, rhs: &IntVector) -> IntVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &IntVector {
    type Output = IntVector;
    fn sub(self, rhs: &IntVector) -> IntVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &IntVector {
    type Output = IntVector;
    fn neg(self) -> IntVector {
        IntVector(self.0.iter().map(|x| -x).collect())
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Matrix whose rows are the given vectors; `cols` fixes the shape when
    /// `rows` is empty.
    pub fn from_rows(cols: usize, rows: &[IntVector]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.dim(), cols, "row length mismatch");
            for (j, x) in r.entries().iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[IntVector]) -> Self {
        Self::from_rows(rows, cols).transpose()
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let vs: Vec<IntVector> = rows.iter().map(|r| IntVector::from_i64(r)).collect();
        Self::from_rows(cols, &vs)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> IntVector {
        IntVector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn col(&self, j: usize) -> IntVector {
        IntVector((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &IntVector) -> IntVector {
        assert_eq!(self.cols, v.dim());
        IntVector((0..self.rows).map(|i| self.row(i).dot(v)).collect())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    pub fn rank(&self) -> usize {
        rank((0..self.rows).map(|i| self.row(i)).collect::<Vec<_>>().as_slice())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// `u * a * v = d` with `d` diagonal, `u`, `v` unimodular and the nonzero
/// diagonal entries (`divisors`) positive and forming a divisibility chain.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub divisors: Vec<BigInt>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }
}

/// Smith normal form by elementary row and column operations, pivoting on the
/// entry of least absolute value.
pub fn snf(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut divisors = Vec::new();

    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = d.get(i, j);
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return SnfResult { d, u, v, divisors };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..m {
                let q = d.get(i, t) / &pivot;
                if !q.is_zero() {
                    d.add_row_multiple(i, t, &-&q);
                    u.add_row_multiple(i, t, &-&q);
                }
                if !d.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = d.get(t, j) / &pivot;
                if !q.is_zero() {
                    d.add_col_multiple(j, t, &-&q);
                    v.add_col_multiple(j, t, &-&q);
                }
                if !d.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row and retry
            let offending = (t + 1..m)
                .find(|&i| (t + 1..n).any(|j| !(d.get(i, j) % &pivot).is_zero()));
            if let Some(i) = offending {
                d.add_row_multiple(t, i, &BigInt::one());
                u.add_row_multiple(t, i, &BigInt::one());
                continue;
            }
            break;
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        divisors.push(d.get(t, t).clone());
    }
    SnfResult { d, u, v, divisors }
}

/// Row-style Hermite normal form: returns `(h, u)` with `u * a = h`, `u`
/// unimodular, `h` in row echelon form with positive pivots and the entries
/// above each pivot reduced into `[0, pivot)`.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        loop {
            let best = (row..m)
                .filter(|&i| !h.get(i, col).is_zero())
                .min_by(|&i, &j| h.get(i, col).abs().cmp(&h.get(j, col).abs()));
            let Some(p) = best else { break };
            h.swap_rows(row, p);
            u.swap_rows(row, p);
            let pivot = h.get(row, col).clone();
            let mut done = true;
            for i in row + 1..m {
                let q = h.get(i, col) / &pivot;
                if !q.is_zero() {
                    h.add_row_multiple(i, row, &-&q);
                    u.add_row_multiple(i, row, &-&q);
                }
                if !h.get(i, col).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(row, col).is_zero() {
            continue;
        }
        if h.get(row, col).is_negative() {
            h.negate_row(row);
            u.negate_row(row);
        }
        let pivot = h.get(row, col).clone();
        for i in 0..row {
            let q = h.get(i, col).div_floor(&pivot);
            if !q.is_zero() {
                h.add_row_multiple(i, row, &-&q);
                u.add_row_multiple(i, row, &-&q);
            }
        }
        row += 1;
    }
    (h, u)
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> IntMatrix {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> =
                (0..n).map(|j| BigRational::from_integer(m.get(i, j).clone())).collect();
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).expect("matrix is not invertible");
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let pivot_row = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    let mut out = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let x = &a[i][n + j];
            assert!(x.is_integer(), "matrix is not unimodular");
            out.set(i, j, x.to_integer());
        }
    }
    out
}

/// Basis of the integer kernel `{x in Z^n : a x = 0}`; the returned vectors
/// generate the full (saturated) kernel lattice.
pub fn integer_kernel(a: &IntMatrix) -> Vec<IntVector> {
    let s = snf(a);
    (s.rank()..a.cols()).map(|j| s.v.col(j)).collect()
}

/// Some integer solution of `a x = b`, if one exists.
pub fn solve_integer_system(a: &IntMatrix, b: &IntVector) -> Option<IntVector> {
    assert_eq!(a.rows(), b.dim());
    let s = snf(a);
    let c = s.u.mul_vec(b);
    let r = s.rank();
    let mut y = vec![BigInt::zero(); a.cols()];
    for i in 0..a.rows() {
        if i < r {
            let (q, rem) = c[i].div_rem(&s.divisors[i]);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !c[i].is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&IntVector(y)))
}

/// A sublattice of `Z^d` with a linearly independent basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeBasis {
    ambient_dim: usize,
    basis: Vec<IntVector>,
}

impl LatticeBasis {
    pub fn zero(ambient_dim: usize) -> Self {
        LatticeBasis { ambient_dim, basis: Vec::new() }
    }

    pub fn standard(ambient_dim: usize) -> Self {
        LatticeBasis {
            ambient_dim,
            basis: (0..ambient_dim).map(|i| IntVector::unit(ambient_dim, i)).collect(),
        }
    }

    /// The lattice generated by arbitrary vectors; the basis is the nonzero
    /// rows of the Hermite normal form, so it is canonical.
    pub fn from_generators(ambient_dim: usize, gens: &[IntVector]) -> Self {
        let gens: Vec<IntVector> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
        if gens.is_empty() {
            return Self::zero(ambient_dim);
        }
        let (h, _) = hnf(&IntMatrix::from_rows(ambient_dim, &gens));
        let basis = (0..h.rows()).map(|i| h.row(i)).filter(|r| !r.is_zero()).collect();
        LatticeBasis { ambient_dim, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[IntVector] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &IntVector) -> bool {
        matches!(solve_in_lattice(self, v), Ok(Some(_)))
    }

    /// Lattice equality by mutual basis membership.
    pub fn same_lattice(&self, other: &LatticeBasis) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.rank() == other.rank()
            && self.basis.iter().all(|b| other.contains(b))
            && other.basis.iter().all(|b| self.contains(b))
    }

    /// Integer basis of the orthogonal complement of the span.
    pub fn orthogonal_equations(&self) -> Vec<IntVector> {
        if self.basis.is_empty() {
            return (0..self.ambient_dim).map(|i| IntVector::unit(self.ambient_dim, i)).collect();
        }
        integer_kernel(&IntMatrix::from_rows(self.ambient_dim, &self.basis))
    }

    /// `Z^d` intersected with the real span of this lattice.
    pub fn saturation(&self) -> LatticeBasis {
        if self.rank() == self.ambient_dim {
            return Self::standard(self.ambient_dim);
        }
        if self.rank() == 0 {
            return self.clone();
        }
        let eqs = self.orthogonal_equations();
        let gens = integer_kernel(&IntMatrix::from_rows(self.ambient_dim, &eqs));
        Self::from_generators(self.ambient_dim, &gens)
    }

    /// `v` lies in the real span of the lattice.
    pub fn span_contains(&self, v: &IntVector) -> bool {
        self.orthogonal_equations().iter().all(|e| e.dot(v).is_zero())
    }

    pub fn combination(&self, coeffs: &[BigInt]) -> IntVector {
        let mut out = IntVector::zero(self.ambient_dim);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            out = &out + &b.scale(c);
        }
        out
    }
}

impl fmt::Debug for LatticeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z{:?}", self.basis)
    }
}

/// Integer coefficients expressing `v` in the basis of `l`, or `None` when
/// `v` is not in `l`.
pub fn solve_in_lattice(l: &LatticeBasis, v: &IntVector) -> Result<Option<Vec<BigInt>>, LatticeError> {
    if v.dim() != l.ambient_dim {
        return Err(LatticeError::DimensionMismatch { expected: l.ambient_dim, found: v.dim() });
    }
    if l.rank() == 0 {
        return Ok(v.is_zero().then(Vec::new));
    }
    let a = IntMatrix::from_columns(l.ambient_dim, &l.basis);
    Ok(solve_integer_system(&a, v).map(IntVector::into_entries))
}

pub fn intersect(l1: &LatticeBasis, l2: &LatticeBasis) -> LatticeBasis {
    assert_eq!(l1.ambient_dim, l2.ambient_dim, "ambient dimensions differ");
    let d = l1.ambient_dim;
    if l1.rank() == 0 || l2.rank() == 0 {
        return LatticeBasis::zero(d);
    }
    let mut cols: Vec<IntVector> = l1.basis.clone();
    cols.extend(l2.basis.iter().map(|b| -b));
    let kernel = integer_kernel(&IntMatrix::from_columns(d, &cols));
    let k1 = l1.rank();
    let gens: Vec<IntVector> = kernel.iter().map(|c| l1.combination(&c.entries()[..k1])).collect();
    LatticeBasis::from_generators(d, &gens)
}

/// Elementary divisors of `sup / sub`. `divisors` has one entry per basis
/// vector of `sub` (ones included); `free_rank` is `rank sup - rank sub`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientInvariants {
    pub divisors: Vec<BigInt>,
    pub free_rank: usize,
}

impl QuotientInvariants {
    /// Order of the quotient when it is finite.
    pub fn index(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.divisors.iter().product())
    }

    pub fn torsion_primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.divisors.iter().flat_map(prime_factors).collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }
}

pub fn quotient_invariants(sub: &LatticeBasis, sup: &LatticeBasis) -> Result<QuotientInvariants, LatticeError> {
    if sub.ambient_dim != sup.ambient_dim {
        return Err(LatticeError::DimensionMismatch { expected: sup.ambient_dim, found: sub.ambient_dim });
    }
    let coords = sub_coordinates(sub, sup)?;
    if coords.is_empty() {
        return Ok(QuotientInvariants { divisors: Vec::new(), free_rank: sup.rank() });
    }
    let s = snf(&IntMatrix::from_rows(sup.rank(), &coords));
    Ok(QuotientInvariants { free_rank: sup.rank() - s.rank(), divisors: s.divisors })
}

/// One representative in `sup` for every coset of `sup / sub` (equal ranks).
pub fn coset_representatives(sub: &LatticeBasis, sup: &LatticeBasis) -> Result<Vec<IntVector>, LatticeError> {
    if sub.rank() != sup.rank() {
        return Err(LatticeError::RankMismatch { sub: sub.rank(), sup: sup.rank() });
    }
    let k = sup.rank();
    if k == 0 {
        return Ok(vec![IntVector::zero(sup.ambient_dim)]);
    }
    let coords = sub_coordinates(sub, sup)?;
    let s = snf(&IntMatrix::from_rows(k, &coords));
    let vinv = unimodular_inverse(&s.v);
    // cosets are sum c_i * row_i(v^-1) with 0 <= c_i < d_i
    let mut reps = vec![IntVector::zero(k)];
    for (i, di) in s.divisors.iter().enumerate() {
        let n = di.to_usize().expect("quotient too large to enumerate");
        let row = vinv.row(i);
        reps = reps
            .iter()
            .flat_map(|r| {
                let row = &row;
                (0..n).map(move |c| r + &row.scale(&BigInt::from(c)))
            })
            .collect();
    }
    Ok(reps.into_iter().map(|c| sup.combination(c.entries())).collect())
}

fn sub_coordinates(sub: &LatticeBasis, sup: &LatticeBasis) -> Result<Vec<IntVector>, LatticeError> {
    sub.basis
        .iter()
        .map(|b| match solve_in_lattice(sup, b)? {
            Some(c) => Ok(IntVector::new(c)),
            None => Err(LatticeError::NotSublattice { vector: b.clone() }),
        })
        .collect()
}

/// Distinct prime factors of `|n|` by trial division.
pub fn prime_factors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p: u64 = 2;
    while n > BigInt::one() {
        let bp = BigInt::from(p);
        if &bp * &bp > n {
            out.push(n.to_u64().expect("prime factor exceeds u64"));
            break;
        }
        if (&n % &bp).is_zero() {
            out.push(p);
            while (&n % &bp).is_zero() {
                n /= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    out
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && prime_factors(&BigInt::from(p)) == vec![p]
}

/// Rank over the rationals.
pub fn rank(vectors: &[IntVector]) -> usize {
    let mut rows: Vec<Vec<BigInt>> = vectors.iter().map(|v| v.entries().to_vec()).collect();
    let Some(n) = rows.first().map(Vec::len) else { return 0 };
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        for i in r + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let (a, b) = (rows[r][c].clone(), rows[i][c].clone());
            let pivot = rows[r].clone();
            let row = &mut rows[i];
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x = &*x * &a - y * &b;
            }
            let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_zero() && !g.is_one() {
                for x in row.iter_mut() {
                    *x = &*x / &g;
                }
            }
        }
        r += 1;
    }
    r
}

/// Rational coefficients `c` with `sum c_i basis_i = v`, for linearly
/// independent `basis`; `None` when `v` is outside the span.
pub fn solve_rational(basis: &[IntVector], v: &IntVector) -> Option<Vec<BigRational>> {
    let k = basis.len();
    let d = v.dim();
    let mut a: Vec<Vec<BigRational>> = (0..d)
        .map(|i| {
            let mut row: Vec<BigRational> =
                basis.iter().map(|b| BigRational::from_integer(b[i].clone())).collect();
            row.push(BigRational::from_integer(v[i].clone()));
            row
        })
        .collect();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..k {
        let Some(p) = (r..d).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..d {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pr = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(pr) {
                    *x = &*x - &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    assert_eq!(r, k, "basis is not linearly independent");
    if (r..d).any(|i| !a[i][k].is_zero()) {
        return None;
    }
    let mut out = vec![BigRational::zero(); k];
    for (row, &c) in pivots.iter().enumerate() {
        out[c] = a[row][k].clone();
    }
    Some(out)
}

/// Sign of the determinant of a square rational matrix.
pub fn det_sign(m: &[Vec<BigRational>]) -> i32 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = 1;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return 0 };
        if p != c {
            a.swap(p, c);
            sign = -sign;
        }
        if a[c][c].is_negative() {
            sign = -sign;
        }
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                let pr = a[c].clone();
                for (x, y) in a[i].iter_mut().zip(pr) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    sign
}

/// First maximal linearly independent subsequence.
pub fn independent_prefix(vectors: &[IntVector]) -> Vec<IntVector> {
    let mut chosen: Vec<IntVector> = Vec::new();
    for v in vectors {
        chosen.push(v.clone());
        if rank(&chosen) < chosen.len() {
            chosen.pop();
        }
    }
    chosen
}
