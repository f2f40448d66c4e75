//! Degree slices of the Čech complex `L^t = ⊕_{dim C = t} R_C`.
//!
//! The degree `a` part of the localization `R_C` is at most one-dimensional:
//! it is spanned by `X^z / X^y` with `y ∈ M_C` and `z ∈ M_D` for a cone
//! `D ⊇ C`, and it is nonzero exactly when `a ∈ M_D + ZM_C` for such a `D`.
//! For `C' ⊂ C` the natural map `(R_C')_a -> (R_C)_a` is nonzero exactly
//! when `a ∈ M_D + ZM_C'` for some `D ⊇ C`. Both conditions are decided
//! exactly: with `h` the sum of the facet normals of `D` containing the
//! smaller cone, the part of a decomposition outside that cone has
//! `h`-degree `h(a)`, which leaves finitely many candidates.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::cohomology::{CochainComplex, CohomologyTable};
use crate::lattice::{solve_integer_system, IntMatrix, IntVector};
use crate::moncomplex::MonoidalComplex;
use crate::polyhedral::CellComplex;

/// `X^z / X^y` with `z - y = a`, `y ∈ M_C`, `z ∈ M_D` for the cone
/// `refuge = D ⊇ C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub z: IntVector,
    pub y: IntVector,
    pub refuge: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub cone: usize,
    pub witness: Witness,
}

#[derive(Clone, Debug)]
pub struct CechSlice {
    pub degree: IntVector,
    /// Nonzero pieces by cone dimension.
    pub pieces: Vec<Vec<Piece>>,
    pub complex: CochainComplex,
}

#[derive(Clone, Debug)]
pub struct CechResult {
    pub slice: CechSlice,
    pub table: CohomologyTable,
}

/// Some `s ∈ M_D` with `a - s ∈ ZM_C`, for cones `C ⊆ D`.
fn decompose(mc: &MonoidalComplex, d: usize, c: usize, a: &IntVector) -> Option<IntVector> {
    let md = mc.monoid(d);
    if !md.group().contains(a) {
        return None;
    }
    let fan = mc.fan();
    let small = fan.cone(c);
    let h = fan
        .cone(d)
        .facet_normals()
        .iter()
        .filter(|f| small.rays().iter().all(|r| f.dot(r).is_zero()))
        .fold(IntVector::zero(a.dim()), |acc, f| &acc + f);
    let target = h.dot(a);
    if target.is_negative() {
        return None;
    }
    let target = target.to_usize().expect("degree fits in usize");
    let outside: Vec<(usize, &IntVector)> = md
        .generators()
        .iter()
        .filter_map(|g| {
            let hg = h.dot(g);
            hg.is_positive().then(|| (hg.to_usize().expect("degree fits"), g))
        })
        .collect();
    let mut levels: Vec<BTreeSet<IntVector>> = vec![BTreeSet::new(); target + 1];
    levels[0].insert(IntVector::zero(a.dim()));
    for k in 1..=target {
        let mut level = BTreeSet::new();
        for &(hg, g) in &outside {
            if hg <= k {
                for s in &levels[k - hg] {
                    level.insert(s + g);
                }
            }
        }
        levels[k] = level;
    }
    let zmc = mc.monoid(c).group();
    levels[target].iter().find(|s| zmc.contains(&(a - *s))).cloned()
}

/// Nonzero piece of `(R_C)_a`, with a witness fraction.
pub fn localization_piece(mc: &MonoidalComplex, c: usize, a: &IntVector) -> Option<Witness> {
    for &d in mc.fan().cofaces_of(c) {
        if let Some(s) = decompose(mc, d, c, a) {
            return Some(witness(mc, c, d, a, &s));
        }
    }
    None
}

fn witness(mc: &MonoidalComplex, c: usize, d: usize, a: &IntVector, s: &IntVector) -> Witness {
    let w = a - s;
    let gens = mc.monoid(c).generators();
    let mut y = IntVector::zero(a.dim());
    if !gens.is_empty() {
        let m = IntMatrix::from_columns(a.dim(), gens);
        let coeffs = solve_integer_system(&m, &w).expect("difference lies in ZM_C");
        for (k, g) in coeffs.entries().iter().zip(gens) {
            if k.is_negative() {
                y = &y + &g.scale(&-k);
            }
        }
    }
    let z = a + &y;
    debug_assert!(mc.monoid(d).contains(&z) && mc.monoid(c).contains(&y));
    Witness { z, y, refuge: d }
}

/// The map `(R_small)_a -> (R_big)_a` is nonzero.
pub fn transition(mc: &MonoidalComplex, small: usize, big: usize, a: &IntVector) -> bool {
    mc.fan().cofaces_of(big).iter().any(|&d| decompose(mc, d, small, a).is_some())
}

/// Smallest `t <= bound` with `a + t·σ_C` in some `M_D`, `D ⊇ C`, where `σ_C`
/// is the sum of the generators of `M_C`.
pub fn monotone_search(mc: &MonoidalComplex, c: usize, a: &IntVector, bound: u64) -> Option<u64> {
    let sigma = mc.monoid(c).generators().iter().fold(IntVector::zero(a.dim()), |acc, g| &acc + g);
    let cofaces = mc.fan().cofaces_of(c);
    (0..=bound).find(|&t| {
        let x = a + &sigma.scale(&BigInt::from(t));
        cofaces.iter().any(|&d| mc.monoid(d).contains(&x))
    })
}

pub fn cech_slice(mc: &MonoidalComplex, cells: &CellComplex, a: &IntVector) -> CechSlice {
    let fan = mc.fan();
    let top = fan.dim();
    let mut pieces: Vec<Vec<Piece>> = vec![Vec::new(); top + 1];
    for (i, c) in fan.cones().iter().enumerate() {
        if let Some(w) = localization_piece(mc, i, a) {
            pieces[c.dim()].push(Piece { cone: i, witness: w });
        }
    }
    let ranks = pieces.iter().map(Vec::len).collect();
    let maps = (0..top)
        .map(|t| {
            let mut m = IntMatrix::zeros(pieces[t + 1].len(), pieces[t].len());
            for (r, big) in pieces[t + 1].iter().enumerate() {
                for (col, small) in pieces[t].iter().enumerate() {
                    let s = cells.incidence(big.cone, small.cone);
                    if s != 0 && transition(mc, small.cone, big.cone, a) {
                        m.set(r, col, BigInt::from(s));
                    }
                }
            }
            m
        })
        .collect();
    let complex = CochainComplex::new(ranks, maps);
    assert!(complex.is_complex(), "Čech slice at {a} is not a complex");
    CechSlice { degree: a.clone(), pieces, complex }
}

/// `H^i_m(R)_a` from the Čech slice.
pub fn cech_degree(mc: &MonoidalComplex, cells: &CellComplex, a: &IntVector) -> CechResult {
    let slice = cech_slice(mc, cells, a);
    let table = slice.complex.cohomology();
    CechResult { slice, table }
}

/// Confirms every nonzero piece by [`monotone_search`] within `bound`;
/// returns the first cone that could not be confirmed.
pub fn confirm_by_search(mc: &MonoidalComplex, slice: &CechSlice, bound: u64) -> Result<(), usize> {
    for p in slice.pieces.iter().flatten() {
        if monotone_search(mc, p.cone, &slice.degree, bound).is_none() {
            return Err(p.cone);
        }
    }
    Ok(())
}

/// Frobenius on `H^i` from degree `a` to degree `p·a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusStatus {
    pub index: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub injective: bool,
    pub bijective: bool,
}

/// The chain map `X^z/X^y ↦ X^{pz}/X^{py}` between the slices at `a` and
/// `p·a`, and its rank on cohomology over `F_p`.
pub fn frobenius_check(mc: &MonoidalComplex, cells: &CellComplex, a: &IntVector, p: u64) -> Vec<FrobeniusStatus> {
    let src = cech_slice(mc, cells, a);
    let tgt = cech_slice(mc, cells, &a.scale(&BigInt::from(p)));
    let top = src.pieces.len();
    // phi_t as a 0/1 matrix: piece of C at a goes to piece of C at p·a
    let phi: Vec<Vec<Vec<u64>>> = (0..top)
        .map(|t| {
            let mut m = vec![vec![0u64; src.pieces[t].len()]; tgt.pieces[t].len()];
            for (c, piece) in src.pieces[t].iter().enumerate() {
                let r = tgt.pieces[t]
                    .iter()
                    .position(|q| q.cone == piece.cone)
                    .expect("Frobenius keeps nonzero pieces nonzero");
                m[r][c] = 1;
            }
            m
        })
        .collect();
    let reduce = |m: &IntMatrix| modp::from_int(m, p);
    let ds: Vec<Vec<Vec<u64>>> = src.complex.maps.iter().map(reduce).collect();
    let dt: Vec<Vec<Vec<u64>>> = tgt.complex.maps.iter().map(reduce).collect();
    for t in 0..top.saturating_sub(1) {
        let (n_src, n_tgt) = (src.pieces[t].len(), tgt.pieces[t].len());
        let left = modp::mul(&dt[t], &phi[t], n_tgt, n_src, p);
        let right = modp::mul(&phi[t + 1], &ds[t], src.pieces[t + 1].len(), n_src, p);
        assert_eq!(left, right, "Frobenius is not a chain map at {a}");
    }
    (0..top)
        .map(|i| {
            let n_src = src.pieces[i].len();
            let n_tgt = tgt.pieces[i].len();
            let empty = Vec::new();
            let out_src = if i < ds.len() { &ds[i] } else { &empty };
            let kernel = modp::kernel(out_src, n_src, p);
            let rank_out = n_src - kernel.len();
            let rank_in_src = if i > 0 { modp::rank(&ds[i - 1], p) } else { 0 };
            let source_dim = n_src - rank_out - rank_in_src;
            let out_tgt = if i < dt.len() { modp::rank(&dt[i], p) } else { 0 };
            let boundaries: Vec<Vec<u64>> = if i > 0 { modp::columns(&dt[i - 1], tgt.pieces[i - 1].len()) } else { Vec::new() };
            let target_dim = n_tgt - out_tgt - modp::rank_rows(&boundaries, p);
            let images: Vec<Vec<u64>> = kernel.iter().map(|z| modp::apply(&phi[i], z, n_tgt, p)).collect();
            let mut both = boundaries.clone();
            both.extend(images);
            let rank = modp::rank_rows(&both, p) - modp::rank_rows(&boundaries, p);
            FrobeniusStatus {
                index: i,
                source_dim,
                target_dim,
                rank,
                injective: rank == source_dim,
                bijective: rank == source_dim && source_dim == target_dim,
            }
        })
        .collect()
}

/// Dense linear algebra over `F_p`; matrices are row lists.
mod modp {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::ToPrimitive;

    use crate::lattice::IntMatrix;

    pub fn from_int(m: &IntMatrix, p: u64) -> Vec<Vec<u64>> {
        let bp = BigInt::from(p);
        (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.get(i, j).mod_floor(&bp).to_u64().expect("reduced")).collect())
            .collect()
    }

    fn inv(x: u64, p: u64) -> u64 {
        let (mut r, mut e, mut b) = (1u128, p - 2, u128::from(x % p));
        let m = u128::from(p);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        r as u64
    }

    fn mulmod(a: u64, b: u64, p: u64) -> u64 {
        (u128::from(a) * u128::from(b) % u128::from(p)) as u64
    }

    /// Row-reduces in place and returns pivot columns.
    fn echelon(rows: &mut [Vec<u64>], p: u64) -> Vec<usize> {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else { continue };
            rows.swap(r, k);
            let iv = inv(rows[r][c], p);
            for x in rows[r].iter_mut() {
                *x = mulmod(*x, iv, p);
            }
            for k in 0..rows.len() {
                if k != r && rows[k][c] != 0 {
                    let f = rows[k][c];
                    for j in 0..ncols {
                        let sub = mulmod(f, rows[r][j], p);
                        rows[k][j] = (rows[k][j] + p - sub) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank_rows(rows: &[Vec<u64>], p: u64) -> usize {
        let mut m = rows.to_vec();
        echelon(&mut m, p).len()
    }

    pub fn rank(m: &[Vec<u64>], p: u64) -> usize {
        rank_rows(m, p)
    }

    /// Basis of `{x : m x = 0}` for a matrix with `ncols` columns.
    pub fn kernel(m: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
        let mut rows = m.to_vec();
        if rows.is_empty() {
            return (0..ncols).map(|i| (0..ncols).map(|j| u64::from(i == j)).collect()).collect();
        }
        let pivots = echelon(&mut rows, p);
        let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![0u64; ncols];
                x[f] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    x[pc] = (p - rows[r][f]) % p;
                }
                x
            })
            .collect()
    }

    pub fn columns(m: &[Vec<u64>], ncols: usize) -> Vec<Vec<u64>> {
        (0..ncols).map(|j| m.iter().map(|row| row[j]).collect()).collect()
    }

    pub fn apply(m: &[Vec<u64>], x: &[u64], nrows: usize, p: u64) -> Vec<u64> {
        (0..nrows).map(|i| m[i].iter().zip(x).fold(0, |acc, (&a, &b)| (acc + mulmod(a, b, p)) % p)).collect()
    }

    pub fn mul(a: &[Vec<u64>], b: &[Vec<u64>], inner: usize, ncols: usize, p: u64) -> Vec<Vec<u64>> {
        a.iter()
            .map(|row| {
                (0..ncols)
                    .map(|j| (0..inner).fold(0, |acc, k| (acc + mulmod(row[k], b[k][j], p)) % p))
                    .collect()
            })
            .collect()
    }

}
