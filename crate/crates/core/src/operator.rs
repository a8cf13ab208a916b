//! Dense complex matrix primitives.
//!
//! Everything in the crate is carried by [`ComplexMatrix`], a column-major
//! `nalgebra` matrix of `Complex64`. The decompositions (SVD, Schur,
//! Hermitian eigen, exponential) are thin wrappers that sort their output,
//! turn non-convergence into [`LinalgError`] and fix the tolerance semantics
//! used by every rank decision in the crate.

use nalgebra::linalg::{Schur, SymmetricEigen, SVD};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

/// Relative rank tolerance used when none is given explicitly.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative Hermiticity tolerance accepted by [`hermitian_eigen`].
pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("index ({i}, {j}) out of range for dimension {d}")]
    IndexOutOfRange { i: usize, j: usize, d: usize },
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
    #[error("vector of length {len} cannot be reshaped to dimension {d}")]
    LengthMismatch { len: usize, d: usize },
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("tolerance {0} outside (0, 1)")]
    InvalidTolerance(f64),
    #[error("{0} failed to converge")]
    ConvergenceFailure(&'static str),
    #[error("matrix exponential overflowed (norm {norm:e})")]
    Overflow { norm: f64 },
    #[error("matrix has non-finite entries")]
    NonFinite,
}

pub type Result<T> = std::result::Result<T, LinalgError>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(d: usize) -> ComplexMatrix {
    ComplexMatrix::identity(d, d)
}

pub fn zeros(d: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(d, d)
}

pub fn diagonal(entries: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&ComplexVector::from_column_slice(entries))
}

pub fn real_diagonal(entries: &[f64]) -> ComplexMatrix {
    let v: Vec<C64> = entries.iter().map(|&x| c(x, 0.0)).collect();
    diagonal(&v)
}

/// Build a matrix from row-major nested slices.
pub fn from_rows(rows: &[Vec<C64>]) -> ComplexMatrix {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    ComplexMatrix::from_fn(nrows, ncols, |i, j| rows[i][j])
}

pub fn ensure_square(a: &ComplexMatrix) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(LinalgError::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    Ok(a.nrows())
}

fn ensure_same_square(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    ensure_square(a)?;
    ensure_square(b)?;
    if a.shape() != b.shape() {
        return Err(LinalgError::DimensionMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(())
}

pub fn is_finite(a: &ComplexMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Conjugate transpose.
pub fn dagger(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_square(a)?;
    Ok(a.adjoint())
}

/// `AB - BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_same_square(a, b)?;
    Ok(a * b - b * a)
}

/// `AB + BA`.
pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_same_square(a, b)?;
    Ok(a * b + b * a)
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// `Tr(A† B)`.
pub fn frobenius_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// `‖A − A†‖_F`.
pub fn hermitian_residual(a: &ComplexMatrix) -> f64 {
    (a - a.adjoint()).norm()
}

pub fn hermitian_part(a: &ComplexMatrix) -> ComplexMatrix {
    (a + a.adjoint()).scale(0.5)
}

pub fn is_unitary(u: &ComplexMatrix, tol: f64) -> bool {
    u.is_square() && (u.adjoint() * u - identity(u.nrows())).norm() <= tol
}

/// `E_{i,j}` with 1-based indices.
pub fn matrix_unit(i: usize, j: usize, d: usize) -> Result<ComplexMatrix> {
    if i == 0 || j == 0 || i > d || j > d {
        return Err(LinalgError::IndexOutOfRange { i, j, d });
    }
    let mut m = zeros(d);
    m[(i - 1, j - 1)] = c(1.0, 0.0);
    Ok(m)
}

/// Generalized Gell-Mann matrices normalized to `Tr(G_i† G_j) = δ_ij`.
///
/// Ordering: the symmetric family over pairs `j < k` (lexicographic), then
/// the antisymmetric family over the same pairs, then the `d - 1` diagonal
/// matrices. At `d = 2` this yields `σx/√2, σy/√2, σz/√2`.
pub fn traceless_orthonormal_basis(d: usize) -> Result<Vec<ComplexMatrix>> {
    if d < 2 {
        return Err(LinalgError::InvalidDimension(d));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|j| ((j + 1)..d).map(move |k| (j, k)))
        .collect();
    let mut basis = Vec::with_capacity(d * d - 1);
    for &(j, k) in &pairs {
        let mut m = zeros(d);
        m[(j, k)] = c(s, 0.0);
        m[(k, j)] = c(s, 0.0);
        basis.push(m);
    }
    for &(j, k) in &pairs {
        let mut m = zeros(d);
        m[(j, k)] = c(0.0, -s);
        m[(k, j)] = c(0.0, s);
        basis.push(m);
    }
    for l in 1..d {
        let norm = ((l * (l + 1)) as f64).sqrt();
        let mut m = zeros(d);
        for i in 0..l {
            m[(i, i)] = c(1.0 / norm, 0.0);
        }
        m[(l, l)] = c(-(l as f64) / norm, 0.0);
        basis.push(m);
    }
    Ok(basis)
}

/// Column-stacking vectorization.
pub fn vec(a: &ComplexMatrix) -> ComplexVector {
    ComplexVector::from_column_slice(a.as_slice())
}

/// Inverse of [`vec`] for a `d x d` matrix.
pub fn unvec(v: &ComplexVector, d: usize) -> Result<ComplexMatrix> {
    if v.len() != d * d {
        return Err(LinalgError::LengthMismatch { len: v.len(), d });
    }
    Ok(ComplexMatrix::from_column_slice(d, d, v.as_slice()))
}

fn max_iterations(n: usize) -> usize {
    1000 * n.max(10)
}

struct SortedSvd {
    singular_values: Vec<f64>,
    /// Right singular vectors as columns, aligned with `singular_values`.
    right: Vec<ComplexVector>,
}

/// SVD of a matrix with at least as many rows as columns.
fn sorted_right_svd(m: ComplexMatrix) -> Result<SortedSvd> {
    let n = m.ncols();
    let svd = SVD::try_new(m, false, true, f64::EPSILON, max_iterations(n))
        .ok_or(LinalgError::ConvergenceFailure("singular value decomposition"))?;
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    Ok(SortedSvd {
        singular_values: order.iter().map(|&i| svd.singular_values[i]).collect(),
        right: order.iter().map(|&i| v_t.row(i).adjoint()).collect(),
    })
}

pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if m.is_empty() {
        return Ok(Vec::new());
    }
    let svd = SVD::try_new(m.clone(), false, false, f64::EPSILON, max_iterations(m.ncols()))
        .ok_or(LinalgError::ConvergenceFailure("singular value decomposition"))?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Sum of singular values.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(a)?.iter().sum())
}

/// Kernel of a (possibly rectangular) matrix, decided by singular values.
#[derive(Debug, Clone)]
pub struct NullSpaceResult {
    /// Orthonormal kernel vectors.
    pub basis: Vec<ComplexVector>,
    pub nullity: usize,
    /// All `ncols` singular values, descending.
    pub singular_values: Vec<f64>,
    /// Absolute cut that separated kernel from range.
    pub threshold: f64,
}

impl NullSpaceResult {
    /// Smallest singular value kept as nonzero, if any.
    pub fn smallest_retained(&self) -> Option<f64> {
        let rank = self.singular_values.len() - self.nullity;
        rank.checked_sub(1).map(|i| self.singular_values[i])
    }

    /// Largest singular value counted as zero, if any.
    pub fn largest_discarded(&self) -> Option<f64> {
        let rank = self.singular_values.len() - self.nullity;
        self.singular_values.get(rank).copied()
    }

    /// True when a singular value sits within a factor 10 of the threshold.
    pub fn is_borderline(&self) -> bool {
        let t = self.threshold;
        self.singular_values
            .iter()
            .any(|&s| s > t / 10.0 && s <= t * 10.0 && t > 0.0)
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol < 1.0 {
        Ok(())
    } else {
        Err(LinalgError::InvalidTolerance(tol))
    }
}

/// `{v : ‖Mv‖ ≤ tol·σ_max·‖v‖}` via the singular value decomposition.
pub fn null_space(m: &ComplexMatrix, tol: f64) -> Result<NullSpaceResult> {
    null_space_scaled(m, tol, 0.0)
}

/// As [`null_space`] with the cut `tol·max(σ_max, scale)`.
///
/// A positive `scale` keeps a matrix that is zero up to rounding from being
/// read as full rank.
pub fn null_space_scaled(m: &ComplexMatrix, tol: f64, scale: f64) -> Result<NullSpaceResult> {
    check_tol(tol)?;
    let n = m.ncols();
    if !is_finite(m) {
        return Err(LinalgError::NonFinite);
    }
    if n == 0 {
        return Ok(NullSpaceResult {
            basis: Vec::new(),
            nullity: 0,
            singular_values: Vec::new(),
            threshold: 0.0,
        });
    }
    // Tall stacks are compressed to their n x n triangular factor first; wide
    // inputs are padded with zero rows so that all n right vectors exist.
    let work = if m.nrows() > 2 * n {
        m.clone().qr().r()
    } else if m.nrows() < n {
        let mut padded = ComplexMatrix::zeros(n, n);
        padded.rows_mut(0, m.nrows()).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let svd = sorted_right_svd(work)?;
    let sigma_max = svd.singular_values.first().copied().unwrap_or(0.0);
    let threshold = tol * sigma_max.max(scale);
    let rank = if threshold == 0.0 {
        0
    } else {
        svd.singular_values.iter().filter(|&&s| s > threshold).count()
    };
    let basis: Vec<ComplexVector> = svd.right.into_iter().skip(rank).collect();
    Ok(NullSpaceResult {
        nullity: basis.len(),
        basis,
        singular_values: svd.singular_values,
        threshold,
    })
}

/// Kernel of the vertical stack of `blocks`, all with the same column count.
///
/// Small stacks are factored in one QR pass; larger ones fold each block into
/// a running triangular factor so that memory stays at two `n x n` matrices.
/// The singular values are those of the full stack either way.
pub fn stacked_null_space(
    blocks: &[ComplexMatrix],
    tol: f64,
    scale: f64,
) -> Result<NullSpaceResult> {
    stacked_null_space_limited(blocks, tol, scale, 1 << 23)
}

fn stacked_null_space_limited(
    blocks: &[ComplexMatrix],
    tol: f64,
    scale: f64,
    one_pass_entries: usize,
) -> Result<NullSpaceResult> {
    check_tol(tol)?;
    let Some(first) = blocks.first() else {
        return null_space_scaled(&ComplexMatrix::zeros(0, 0), tol, scale);
    };
    let n = first.ncols();
    if let Some(bad) = blocks.iter().find(|b| b.ncols() != n) {
        return Err(LinalgError::DimensionMismatch {
            left: first.shape(),
            right: bad.shape(),
        });
    }
    let total_rows: usize = blocks.iter().map(ComplexMatrix::nrows).sum();
    if total_rows * n <= one_pass_entries {
        let mut stacked = ComplexMatrix::zeros(total_rows, n);
        let mut row = 0;
        for b in blocks {
            stacked.rows_mut(row, b.nrows()).copy_from(b);
            row += b.nrows();
        }
        return null_space_scaled(&stacked, tol, scale);
    }
    let mut r = ComplexMatrix::zeros(0, n);
    for b in blocks {
        let mut both = ComplexMatrix::zeros(r.nrows() + b.nrows(), n);
        both.rows_mut(0, r.nrows()).copy_from(&r);
        both.rows_mut(r.nrows(), b.nrows()).copy_from(b);
        r = if both.nrows() > n { both.qr().r() } else { both };
    }
    null_space_scaled(&r, tol, scale)
}

/// Orthonormal basis of the column space of `m`.
pub fn range_basis(m: &ComplexMatrix, tol: f64) -> Result<Vec<ComplexVector>> {
    check_tol(tol)?;
    if m.is_empty() {
        return Ok(Vec::new());
    }
    let svd = SVD::try_new(m.clone(), true, false, f64::EPSILON, max_iterations(m.ncols()))
        .ok_or(LinalgError::ConvergenceFailure("singular value decomposition"))?;
    let u = svd.u.expect("left singular vectors requested");
    let sigma_max = svd.singular_values.max();
    if sigma_max == 0.0 {
        return Ok(Vec::new());
    }
    Ok((0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > tol * sigma_max)
        .map(|i| u.column(i).into_owned())
        .collect())
}

/// All eigenvalues with multiplicity, unordered, from a complex Schur form.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<C64>> {
    let n = ensure_square(a)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    if !is_finite(a) {
        return Err(LinalgError::NonFinite);
    }
    // The QR iteration deflates against the diagonal, so a cluster of exact
    // zeros can stall it; a shift by the norm moves the cluster off zero.
    let norm = a.norm();
    for shift in [0.0, norm] {
        let shifted = a + identity(n) * c(shift, 0.0);
        if let Some(vals) = Schur::try_new(shifted, f64::EPSILON, max_iterations(n))
            .and_then(|s| s.eigenvalues())
        {
            return Ok(vals.iter().map(|z| z - c(shift, 0.0)).collect());
        }
    }
    Err(LinalgError::ConvergenceFailure("Schur decomposition"))
}

/// Ascending real eigenvalues and matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = real_diagonal(&self.eigenvalues);
        &self.eigenvectors * d * self.eigenvectors.adjoint()
    }
}

pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<HermitianEigen> {
    hermitian_eigen_tol(a, HERMITIAN_TOL)
}

pub fn hermitian_eigen_tol(a: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    let n = ensure_square(a)?;
    if !is_finite(a) {
        return Err(LinalgError::NonFinite);
    }
    let residual = hermitian_residual(a);
    if residual > tol * a.norm() {
        return Err(LinalgError::NotHermitian { residual });
    }
    if n == 0 {
        return Ok(HermitianEigen {
            eigenvalues: Vec::new(),
            eigenvectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::try_new(hermitian_part(a), f64::EPSILON, max_iterations(n))
        .ok_or(LinalgError::ConvergenceFailure("Hermitian eigendecomposition"))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Matrix exponential (scaling and squaring with a Padé approximant).
pub fn expm(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_square(a)?;
    if !is_finite(a) {
        return Err(LinalgError::NonFinite);
    }
    let norm = a.norm();
    // e^{‖A‖} must stay representable for the squaring phase to be safe.
    if norm > 700.0 * (a.nrows().max(1) as f64) {
        return Err(LinalgError::Overflow { norm });
    }
    let e = a.exp();
    if !is_finite(&e) {
        return Err(LinalgError::Overflow { norm });
    }
    Ok(e)
}

/// Spin-1/2 and Pauli matrices in the basis `|1⟩, |2⟩`.
pub mod pauli {
    use super::{c, from_rows, ComplexMatrix};

    /// `|1⟩⟨2|`.
    pub fn sigma_plus() -> ComplexMatrix {
        from_rows(&[vec![c(0., 0.), c(1., 0.)], vec![c(0., 0.), c(0., 0.)]])
    }

    /// `|2⟩⟨1|`.
    pub fn sigma_minus() -> ComplexMatrix {
        from_rows(&[vec![c(0., 0.), c(0., 0.)], vec![c(1., 0.), c(0., 0.)]])
    }

    pub fn sigma_x() -> ComplexMatrix {
        from_rows(&[vec![c(0., 0.), c(1., 0.)], vec![c(1., 0.), c(0., 0.)]])
    }

    pub fn sigma_y() -> ComplexMatrix {
        from_rows(&[vec![c(0., 0.), c(0., -1.)], vec![c(0., 1.), c(0., 0.)]])
    }

    pub fn sigma_z() -> ComplexMatrix {
        from_rows(&[vec![c(1., 0.), c(0., 0.)], vec![c(0., 0.), c(-1., 0.)]])
    }
}
