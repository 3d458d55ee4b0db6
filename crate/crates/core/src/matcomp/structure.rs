use crate::error::{Error, Result};
use crate::linalg::{dense_svd, DenseMatrix};

/// Singular values at or below this fraction of the largest do not count
/// toward numeric rank.
pub const DEFAULT_RANK_TOLERANCE: f64 = 1e-8;

/// Rank and incoherence summary of a matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureReport {
    pub numeric_rank: usize,
    /// `max(leverage_u, leverage_v)`.
    pub coherence: f64,
    /// Largest squared row norm of the left singular vectors.
    pub leverage_u: f64,
    /// Largest squared row norm of the right singular vectors.
    pub leverage_v: f64,
    /// All singular values, descending.
    pub singular_values: Vec<f64>,
}

/// Numeric rank, leverage scores and coherence from the compact SVD.
///
/// An all-zero matrix reports rank 0 and coherence 0.
pub fn structure_report(matrix: &DenseMatrix, rank_tolerance: f64) -> Result<StructureReport> {
    let (rows, cols) = matrix.dims();
    if rows == 0 || cols == 0 {
        return Err(Error::invalid("structure_report: empty matrix"));
    }
    if !matrix.is_finite() {
        return Err(Error::invalid("structure_report: matrix has non-finite entries"));
    }
    if !(rank_tolerance > 0.0) {
        return Err(Error::invalid("structure_report: rank tolerance must be positive"));
    }
    let f = dense_svd(&matrix.to_faer(), "structure_report")?;
    let sigma_max = f.s.first().copied().unwrap_or(0.0);
    let numeric_rank = if sigma_max > 0.0 {
        f.s.iter().filter(|s| **s > rank_tolerance * sigma_max).count()
    } else {
        0
    };
    let leverage = |m: &faer::Mat<f64>| -> f64 {
        (0..m.nrows())
            .map(|i| (0..numeric_rank).map(|k| m[(i, k)] * m[(i, k)]).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let leverage_u = leverage(&f.u);
    let leverage_v = leverage(&f.v);
    Ok(StructureReport {
        numeric_rank,
        coherence: leverage_u.max(leverage_v),
        leverage_u,
        leverage_v,
        singular_values: f.s,
    })
}
