//! Low-rank matrix completion.
//!
//! The solver minimizes the regularized nuclear-norm objective
//!
//! ```text
//! f(X) = sum_{(i,j) in Omega} (X_ij - M_ij)^2 + lambda * ||X||_*
//! ```
//!
//! by iterating `X <- S_{lambda/2}(P_Omega(M) + P_Omega^perp(X))`, where `S_t`
//! soft-thresholds singular values by `t`. The analyzers report numeric rank,
//! leverage scores and coherence, and the sampling bound used to size
//! observation budgets.

mod bound;
mod partial;
mod shrink;
mod solver;
mod structure;

pub use bound::{sample_bound, sample_bound_value, LogBase};
pub use partial::PartialMatrix;
pub use shrink::soft_threshold_svd;
pub use solver::{
    complete, complete_from, objective, CompletionResult, IterationRecord, Lambda, SolverConfig,
    SvdStrategy,
};
pub use structure::{structure_report, StructureReport, DEFAULT_RANK_TOLERANCE};

/// Nuclear norm (sum of singular values) of a dense matrix.
pub fn nuclear_norm(matrix: &crate::DenseMatrix) -> crate::Result<f64> {
    let f = crate::linalg::dense_svd(&matrix.to_faer(), "nuclear norm")?;
    Ok(f.s.iter().sum())
}
