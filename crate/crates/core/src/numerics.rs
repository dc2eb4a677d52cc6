//! Dense linear algebra used by the classifiers: eigendecomposition-based
//! pseudo-inverses of symmetric PSD matrices, PCA and the standard normal CDF.
//!
//! The symmetric eigensolver itself is nalgebra's; everything on top of it
//! (ordering, thresholding, truncation, PSD checks) lives here.

use std::f64::consts::SQRT_2;

use nalgebra::{DMatrix, DVector};

use crate::error::{domain, Error, Result};

/// Absolute tolerance for accepting a matrix as symmetric.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Eigenvalues below `-NEGATIVE_EIGEN_TOL * λ_max` reject a matrix as not PSD.
pub const NEGATIVE_EIGEN_TOL: f64 = 1e-8;

/// Default relative threshold for dropping eigen-directions: `1e-10 * dim`.
pub fn default_rel_tol(dim: usize) -> f64 {
    1e-10 * dim as f64
}

/// A square symmetric matrix with at least one row.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix(DMatrix<f64>);

impl SymmetricMatrix {
    /// Validates squareness, finiteness and symmetry (absolute tolerance
    /// [`SYMMETRY_TOL`]). The stored matrix is the exact average of `m` and its
    /// transpose.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(domain(format!(
                "matrix is {}x{}, not square",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.nrows() == 0 {
            return Err(domain("matrix has dimension 0"));
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("symmetric matrix"));
        }
        let n = m.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                let diff = (m[(i, j)] - m[(j, i)]).abs();
                if diff > SYMMETRY_TOL {
                    return Err(Error::NotSymmetric { row: i, col: j, diff });
                }
            }
        }
        Ok(Self::symmetrized(m))
    }

    /// Builds from a matrix known to be symmetric up to rounding.
    pub(crate) fn symmetrized(m: DMatrix<f64>) -> Self {
        let t = m.transpose();
        SymmetricMatrix((m + t) * 0.5)
    }

    pub fn identity(dim: usize) -> Self {
        SymmetricMatrix(DMatrix::identity(dim, dim))
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }
}

/// Eigenpairs of a symmetric matrix, eigenvalues sorted non-increasing.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: DVector<f64>,
    /// Orthonormal eigenvectors, one per column, in eigenvalue order.
    pub eigenvectors: DMatrix<f64>,
}

impl EigenDecomposition {
    pub fn of(m: &SymmetricMatrix) -> Self {
        let eig = m.as_matrix().clone().symmetric_eigen();
        let n = m.dim();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
        let mut eigenvectors = DMatrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
        }
        EigenDecomposition {
            eigenvalues,
            eigenvectors,
        }
    }

    /// `V diag(λ) Vᵀ`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        &self.eigenvectors * DMatrix::from_diagonal(&self.eigenvalues) * self.eigenvectors.transpose()
    }

    fn largest(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Rejects matrices with eigenvalues below `-1e-8 * λ_max`.
    fn check_psd(&self) -> Result<()> {
        let largest = self.largest();
        let smallest = self.eigenvalues[self.eigenvalues.len() - 1];
        let scale = largest.max(smallest.abs());
        if smallest < -NEGATIVE_EIGEN_TOL * scale {
            return Err(Error::NotPsd {
                eigenvalue: smallest,
                largest,
            });
        }
        Ok(())
    }
}

/// Moore–Penrose pseudo-inverse of a symmetric PSD matrix.
///
/// Eigenvalues `λ <= rel_tol * λ_max` are treated as zero and their directions
/// dropped. Small negative eigenvalues (within `1e-8 * λ_max`) are clamped to zero.
pub fn pseudo_inverse(m: &SymmetricMatrix, rel_tol: f64) -> Result<SymmetricMatrix> {
    truncated_pseudo_inverse(m, m.dim(), rel_tol)
}

/// Pseudo-inverse restricted to the `rank` largest eigenvalues. The remaining
/// directions map to zero. With `rank == dim` this is [`pseudo_inverse`].
pub fn truncated_pseudo_inverse(m: &SymmetricMatrix, rank: usize, rel_tol: f64) -> Result<SymmetricMatrix> {
    let dim = m.dim();
    if rank > dim {
        return Err(domain(format!("rank {rank} exceeds dimension {dim}")));
    }
    if !(rel_tol.is_finite() && rel_tol > 0.0) {
        return Err(domain(format!(
            "relative tolerance must be positive, got {rel_tol}"
        )));
    }
    let eig = EigenDecomposition::of(m);
    eig.check_psd()?;
    let threshold = rel_tol * eig.largest();
    // eigenvalues are sorted, so the kept set is a prefix
    let kept = eig
        .eigenvalues
        .iter()
        .take(rank)
        .take_while(|&&l| l > threshold && l > 0.0)
        .count();
    let v = eig.eigenvectors.columns(0, kept);
    let inv = DVector::from_iterator(kept, eig.eigenvalues.iter().take(kept).map(|l| 1.0 / l));
    let mut scaled = v.clone_owned();
    for (mut col, s) in scaled.column_iter_mut().zip(inv.iter()) {
        col *= *s;
    }
    Ok(SymmetricMatrix::symmetrized(scaled * v.transpose()))
}

/// Principal component model fit on a data matrix (rows are objects).
#[derive(Debug, Clone)]
pub struct PcaModel {
    pub mean: DVector<f64>,
    /// `p x retained`, orthonormal columns.
    pub components: DMatrix<f64>,
    /// Variance along each retained component, `n - 1` denominator.
    pub explained_variance: DVector<f64>,
    pub retained: usize,
}

/// Fits PCA and keeps the smallest number of leading components whose
/// cumulative variance reaches `variance_fraction` of the total.
pub fn pca_fit(data: &DMatrix<f64>, variance_fraction: f64) -> Result<PcaModel> {
    let (n, p) = data.shape();
    if n < 2 {
        return Err(domain(format!("PCA needs at least 2 rows, got {n}")));
    }
    if p == 0 {
        return Err(domain("PCA needs at least one column"));
    }
    if !(variance_fraction > 0.0 && variance_fraction <= 1.0) {
        return Err(domain(format!(
            "variance fraction must lie in (0, 1], got {variance_fraction}"
        )));
    }
    if data.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("PCA input"));
    }
    let mean = data.row_mean().transpose();
    let mut centered = data.clone();
    for mut row in centered.row_iter_mut() {
        row -= mean.transpose();
    }
    let cov = SymmetricMatrix::symmetrized(centered.tr_mul(&centered) / (n as f64 - 1.0));
    let eig = EigenDecomposition::of(&cov);
    let largest = eig.largest();
    if largest.is_nan() || largest <= 0.0 {
        return Err(Error::DegenerateData("total variance is zero".into()));
    }
    // rounding-level eigenvalues carry no variance
    let cutoff = default_rel_tol(p) * largest;
    let variances: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| if l > cutoff { l } else { 0.0 })
        .take_while(|&l| l > 0.0)
        .collect();
    let total: f64 = variances.iter().sum();
    let target = variance_fraction * total;
    let mut cumulative = 0.0;
    let mut retained = variances.len();
    for (k, v) in variances.iter().enumerate() {
        cumulative += v;
        if cumulative >= target {
            retained = k + 1;
            break;
        }
    }
    Ok(PcaModel {
        mean,
        components: eig.eigenvectors.columns(0, retained).clone_owned(),
        explained_variance: DVector::from_column_slice(&variances[..retained]),
        retained,
    })
}

/// Centers `data` by the model mean and projects onto the retained components.
pub fn pca_transform(model: &PcaModel, data: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if data.ncols() != model.mean.len() {
        return Err(domain(format!(
            "data has {} columns, PCA model expects {}",
            data.ncols(),
            model.mean.len()
        )));
    }
    let mut centered = data.clone();
    for mut row in centered.row_iter_mut() {
        row -= model.mean.transpose();
    }
    Ok(centered * &model.components)
}

/// Maps projected coordinates back to feature space.
pub fn pca_inverse_transform(model: &PcaModel, scores: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if scores.ncols() != model.retained {
        return Err(domain(format!(
            "scores have {} columns, PCA model retains {}",
            scores.ncols(),
            model.retained
        )));
    }
    let mut out = scores * model.components.transpose();
    for mut row in out.row_iter_mut() {
        row += model.mean.transpose();
    }
    Ok(out)
}

/// Standard normal cumulative distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}
