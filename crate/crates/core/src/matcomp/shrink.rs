use faer::Mat;

use crate::error::{Error, Result};
use crate::linalg::{dense_svd, DenseMatrix, Factorization};

/// Leading shrunk triplets of a factorization.
pub(crate) struct Shrunk {
    pub matrix: Mat<f64>,
    /// Shrunk singular values that were retained (all strictly positive).
    pub values: Vec<f64>,
}

/// Subtract `threshold` from each singular value, clamp at zero, keep at most
/// `max_rank` components, and rebuild the matrix.
pub(crate) fn shrink_factorization(
    f: &Factorization,
    threshold: f64,
    max_rank: usize,
    rows: usize,
    cols: usize,
) -> Shrunk {
    let values: Vec<f64> = f
        .s
        .iter()
        .take(max_rank)
        .map(|s| s - threshold)
        .take_while(|s| *s > 0.0)
        .collect();
    let k = values.len();
    if k == 0 {
        return Shrunk {
            matrix: Mat::zeros(rows, cols),
            values,
        };
    }
    let us = Mat::from_fn(rows, k, |i, j| f.u[(i, j)] * values[j]);
    let matrix = &us * f.v.subcols(0, k).transpose();
    Shrunk { matrix, values }
}

/// Singular-value soft thresholding: `U * max(Sigma - threshold, 0) * V^T`,
/// retaining at most `max_rank` components.
pub fn soft_threshold_svd(
    matrix: &DenseMatrix,
    threshold: f64,
    max_rank: usize,
) -> Result<DenseMatrix> {
    if !matrix.is_finite() {
        return Err(Error::invalid("soft_threshold_svd: matrix has non-finite entries"));
    }
    if !(threshold >= 0.0 && threshold.is_finite()) {
        return Err(Error::invalid(format!(
            "soft_threshold_svd: threshold must be finite and >= 0, got {threshold}"
        )));
    }
    if max_rank == 0 {
        return Err(Error::invalid("soft_threshold_svd: max_rank must be positive"));
    }
    let (rows, cols) = matrix.dims();
    let f = dense_svd(&matrix.to_faer(), "soft_threshold_svd")?;
    let shrunk = shrink_factorization(&f, threshold, max_rank, rows, cols);
    Ok(DenseMatrix::from_faer(&shrunk.matrix))
}
