//! Dense complex linear algebra shared by every module.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. Equality follows one policy
//! throughout: relative Frobenius distance at most [`REL_TOL`], or absolute
//! distance at most [`ABS_TOL`] when both sides are near zero.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;
pub type RMat = DMatrix<f64>;

pub const REL_TOL: f64 = 1e-10;
pub const ABS_TOL: f64 = 1e-12;
/// Singular values below this fraction of the largest one count as zero.
pub const RANK_TOL: f64 = 1e-9;
/// Grams with a larger condition number are refused.
pub const COND_LIMIT: f64 = 1e8;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `i^k` for any integer `k`.
pub fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    }
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> CMat {
    CMat::zeros(r, c)
}

/// Builds a matrix from integer-valued real rows (test fixtures, Pauli blocks).
pub fn from_rows_c(rows: &[&[Complex64]]) -> CMat {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    CMat::from_fn(r, c, |i, j| rows[i][j])
}

pub fn from_rows_real(rows: &[&[f64]]) -> CMat {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    CMat::from_fn(r, c, |i, j| cx(rows[i][j], 0.0))
}

pub fn diag(entries: &[Complex64]) -> CMat {
    CMat::from_diagonal(&CVec::from_column_slice(entries))
}

pub fn diag_real(entries: &[f64]) -> CMat {
    CMat::from_fn(entries.len(), entries.len(), |i, j| {
        if i == j {
            cx(entries[i], 0.0)
        } else {
            ZERO
        }
    })
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn comm(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn anticomm(a: &CMat, b: &CMat) -> CMat {
    a * b + b * a
}

pub fn frob(a: &CMat) -> f64 {
    a.norm()
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// Relative Frobenius distance, falling back to the absolute distance when
/// both operands are (numerically) zero.
pub fn rel_dist(a: &CMat, b: &CMat) -> f64 {
    let d = frob(&(a - b));
    let scale = frob(a).max(frob(b));
    if scale <= ABS_TOL {
        d
    } else {
        d / scale
    }
}

pub fn approx_eq(a: &CMat, b: &CMat) -> bool {
    a.shape() == b.shape() && (rel_dist(a, b) <= REL_TOL || frob(&(a - b)) <= ABS_TOL)
}

pub fn is_hermitian(h: &CMat) -> bool {
    h.is_square() && approx_eq(h, &h.adjoint())
}

pub fn block_diag(blocks: &[CMat]) -> CMat {
    let r: usize = blocks.iter().map(|b| b.nrows()).sum();
    let c: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(r, c);
    let (mut r0, mut c0) = (0, 0);
    for b in blocks {
        out.view_mut((r0, c0), b.shape()).copy_from(b);
        r0 += b.nrows();
        c0 += b.ncols();
    }
    out
}

/// Assembles a square block matrix from an `n x n` grid of equally sized blocks;
/// `None` entries are zero.
pub fn block_grid(grid: &[Vec<Option<CMat>>], block: usize) -> CMat {
    let n = grid.len();
    let mut out = zeros(n * block, n * block);
    for (bi, row) in grid.iter().enumerate() {
        for (bj, entry) in row.iter().enumerate() {
            if let Some(b) = entry {
                out.view_mut((bi * block, bj * block), (block, block)).copy_from(b);
            }
        }
    }
    out
}

pub fn sub_block(m: &CMat, bi: usize, bj: usize, block: usize) -> CMat {
    m.view((bi * block, bj * block), (block, block)).into_owned()
}

/// Product `a * b` that skips the zero entries of `a`. Representation matrices
/// of finite algebras are extremely sparse, so this is much cheaper than a dense
/// product for the large pair sweeps of the form computations.
pub fn spmul(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.ncols(), b.nrows(), "spmul shape mismatch");
    let mut out = zeros(a.nrows(), b.ncols());
    for k in 0..a.ncols() {
        for i in 0..a.nrows() {
            let v = a[(i, k)];
            if v.re == 0.0 && v.im == 0.0 {
                continue;
            }
            for j in 0..b.ncols() {
                let w = b[(k, j)];
                if w.re != 0.0 || w.im != 0.0 {
                    out[(i, j)] += v * w;
                }
            }
        }
    }
    out
}

/// Hermitian eigendecomposition; eigenvalues ascending with matching columns.
pub fn hermitian_eigen(h: &CMat) -> (Vec<f64>, CMat) {
    let eig = h.clone().symmetric_eigen();
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = idx.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vecs = CMat::from_fn(h.nrows(), idx.len(), |i, j| eig.eigenvectors[(i, idx[j])]);
    (vals, vecs)
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Condition number from singular values (infinite for singular input).
pub fn condition_number(m: &CMat) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Inverse refusing matrices whose condition number exceeds `limit`.
pub fn inverse_checked(m: &CMat, limit: f64) -> Option<(CMat, f64)> {
    let cond = condition_number(m);
    if !cond.is_finite() || cond > limit {
        return None;
    }
    m.clone().try_inverse().map(|inv| (inv, cond))
}

/// Orthonormal basis of the complex null space of `a`, using the SVD with
/// the rank threshold [`RANK_TOL`].
pub fn null_space(a: &CMat) -> Vec<CVec> {
    let n = a.ncols();
    // Pad wide systems so the SVD returns a full set of right singular vectors.
    let padded = if a.nrows() < n {
        let mut p = zeros(n, n);
        p.view_mut((0, 0), a.shape()).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cut = RANK_TOL * smax.max(f64::MIN_POSITIVE);
    (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] <= cut)
        .map(|k| v_t.row(k).adjoint())
        .collect()
}

/// Orthonormal basis of the real null space of a real matrix.
pub fn real_null_space(a: &RMat) -> Vec<DVector<f64>> {
    let n = a.ncols();
    let padded = if a.nrows() < n {
        let mut p = RMat::zeros(n, n);
        p.view_mut((0, 0), a.shape()).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cut = RANK_TOL * smax.max(f64::MIN_POSITIVE);
    (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] <= cut)
        .map(|k| v_t.row(k).transpose())
        .collect()
}

/// Entry positions (column-major linear indices) where at least one matrix is nonzero.
pub fn joint_support(mats: &[CMat]) -> Vec<usize> {
    let Some(first) = mats.first() else {
        return Vec::new();
    };
    let len = first.len();
    (0..len)
        .filter(|&k| mats.iter().any(|m| m[k].re != 0.0 || m[k].im != 0.0))
        .collect()
}

/// Real coordinates of each matrix restricted to `support`: one column per
/// matrix, rows `(re, im)` interleaved per support entry.
pub fn realify_columns(mats: &[CMat], support: &[usize]) -> RMat {
    let mut out = RMat::zeros(2 * support.len(), mats.len());
    for (j, m) in mats.iter().enumerate() {
        for (r, &k) in support.iter().enumerate() {
            out[(2 * r, j)] = m[k].re;
            out[(2 * r + 1, j)] = m[k].im;
        }
    }
    out
}

/// Inverse of [`realify_columns`] for a single real coordinate vector.
pub fn unrealify(col: &[f64], support: &[usize], shape: (usize, usize)) -> CMat {
    let mut m = zeros(shape.0, shape.1);
    for (r, &k) in support.iter().enumerate() {
        m[k] = cx(col[2 * r], col[2 * r + 1]);
    }
    m
}

/// A real-linear span of complex matrices reduced to an orthonormal basis
/// (Frobenius real inner product `Re tr(S^dagger T)`).
#[derive(Debug, Clone)]
pub struct RealSpan {
    pub basis: Vec<CMat>,
    pub singular_values: Vec<f64>,
    pub rank: usize,
    /// Ratio between the smallest retained and the largest discarded singular value.
    pub gap: f64,
}

/// Orthonormal basis of the real span, by twice-iterated classical
/// Gram-Schmidt on the realified columns followed by an SVD of the (small)
/// coordinate matrix. Columns whose residual falls below `RANK_TOL` times the
/// largest column norm are treated as dependent.
pub fn real_span(mats: &[CMat]) -> RealSpan {
    real_span_scaled(mats, None)
}

/// [`real_span`] with an explicit reference scale for the dependence cut.
pub fn real_span_scaled(mats: &[CMat], scale: Option<f64>) -> RealSpan {
    let empty = RealSpan { basis: Vec::new(), singular_values: Vec::new(), rank: 0, gap: f64::INFINITY };
    let Some(first) = mats.first() else {
        return empty;
    };
    let shape = first.shape();
    let support = joint_support(mats);
    if support.is_empty() {
        return empty;
    }
    let a = realify_columns(mats, &support);
    let norms: Vec<f64> = a.column_iter().map(|c| c.norm()).collect();
    let reference = scale.unwrap_or_else(|| norms.iter().copied().fold(0.0, f64::max));
    if reference == 0.0 {
        return empty;
    }
    let cut = RANK_TOL * reference;
    let mut q: Vec<DVector<f64>> = Vec::new();
    let mut worst_rejected: f64 = 0.0;
    for j in 0..a.ncols() {
        if norms[j] <= cut {
            worst_rejected = worst_rejected.max(norms[j]);
            continue;
        }
        let mut v: DVector<f64> = a.column(j).into_owned();
        for _ in 0..2 {
            let coeffs: Vec<f64> = q.par_iter().map(|b| b.dot(&v)).collect();
            for (b, c) in q.iter().zip(coeffs) {
                v.axpy(-c, b, 1.0);
            }
        }
        let r = v.norm();
        if r > cut {
            q.push(v / r);
        } else {
            worst_rejected = worst_rejected.max(r);
        }
    }
    let rank = q.len();
    if rank == 0 {
        return empty;
    }
    let qm = RMat::from_columns(&q);
    let coords = qm.transpose() * &a;
    let svd = coords.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
    let sv: Vec<f64> = order.iter().map(|&k| svd.singular_values[k]).collect();
    let rotated = &qm * u;
    let basis = order[..rank]
        .iter()
        .map(|&k| {
            let col: Vec<f64> = rotated.column(k).iter().copied().collect();
            unrealify(&col, &support, shape)
        })
        .collect();
    let smallest = sv[rank - 1];
    let gap = if worst_rejected > 0.0 { smallest / worst_rejected } else { f64::INFINITY };
    RealSpan { basis, singular_values: sv[..rank].to_vec(), rank, gap }
}

/// Real inner product `Re tr(A† B)`.
pub fn real_inner(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.re * y.re + x.im * y.im).sum()
}

/// Residual of `x` after removing its component along an orthonormal real basis.
pub fn real_residual(x: &CMat, basis: &[CMat]) -> CMat {
    let mut r = x.clone();
    for _ in 0..2 {
        let coeffs: Vec<f64> = basis.par_iter().map(|b| real_inner(b, &r)).collect();
        for (b, c) in basis.iter().zip(coeffs) {
            if c != 0.0 {
                r -= b.scale(c);
            }
        }
    }
    r
}

/// Largest singular value of a real matrix, zero for empty input.
pub fn real_rank(a: &RMat) -> usize {
    if a.is_empty() {
        return 0;
    }
    let sv = a.singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_TOL * smax).count()
}
