use faer::Mat;
use rand_distr::{Distribution, StandardNormal};

use super::partial::PartialMatrix;
use super::shrink::shrink_factorization;
use crate::error::{Error, Result};
use crate::linalg::{dense_svd, subspace_svd, DenseMatrix, Factorization};
use crate::rng::{stream_rng, Stream};

/// Regularization weight of the nuclear-norm term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lambda {
    Absolute(f64),
    /// Fraction of the largest singular value of the filled input matrix.
    SpectralFraction(f64),
}

impl Default for Lambda {
    fn default() -> Self {
        Lambda::SpectralFraction(0.1)
    }
}

/// How each iteration obtains singular triplets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SvdStrategy {
    /// Full thin SVD every iteration.
    Dense,
    /// Block subspace iteration on `max_rank + oversample` vectors, warm
    /// started from the previous iteration's right subspace.
    Subspace { oversample: usize, power_iters: usize },
    /// Subspace iteration when the rank cap is small relative to the matrix,
    /// dense otherwise.
    Auto,
}

impl Default for SvdStrategy {
    fn default() -> Self {
        SvdStrategy::Auto
    }
}

const AUTO_OVERSAMPLE: usize = 10;
const AUTO_POWER_ITERS: usize = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub lambda: Lambda,
    /// Cap on retained singular values; `None` means `min(rows, cols)`.
    pub max_rank: Option<usize>,
    /// Relative Frobenius change between iterates that stops the solver.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Initial value of unobserved entries.
    pub fill_value: f64,
    pub svd: SvdStrategy,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            lambda: Lambda::default(),
            max_rank: None,
            tolerance: 1e-4,
            max_iterations: 500,
            fill_value: 0.0,
            svd: SvdStrategy::Auto,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::invalid(format!(
                "solver tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("solver max_iterations must be at least 1"));
        }
        let lambda_ok = match self.lambda {
            Lambda::Absolute(l) | Lambda::SpectralFraction(l) => l >= 0.0 && l.is_finite(),
        };
        if !lambda_ok {
            return Err(Error::invalid(format!("lambda must be finite and >= 0: {:?}", self.lambda)));
        }
        if self.max_rank == Some(0) {
            return Err(Error::invalid("max_rank must be positive"));
        }
        if !self.fill_value.is_finite() {
            return Err(Error::invalid("fill_value must be finite"));
        }
        Ok(())
    }
}

/// Per-iteration diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub objective: f64,
    /// Squared error over observed entries.
    pub observed_residual: f64,
    pub relative_change: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompletionResult {
    pub completed: DenseMatrix,
    pub iterations: usize,
    /// Objective at the returned iterate.
    pub objective: f64,
    /// Rank of the returned iterate after thresholding.
    pub numeric_rank: usize,
    pub converged: bool,
    /// The resolved regularization weight.
    pub lambda: f64,
    pub history: Vec<IterationRecord>,
}

/// Objective `sum_Omega (X - M)^2 + lambda ||X||_*`.
pub fn objective(partial: &PartialMatrix, x: &DenseMatrix, lambda: f64) -> Result<f64> {
    let nuclear = super::nuclear_norm(x)?;
    Ok(observed_residual(partial, x.as_slice(), x.cols()) + lambda * nuclear)
}

fn observed_residual(partial: &PartialMatrix, x: &[f64], cols: usize) -> f64 {
    let m = partial.values();
    partial
        .omega()
        .iter()
        .map(|&(i, j)| {
            let d = x[i * cols + j] - m[(i, j)];
            d * d
        })
        .sum()
}

/// Largest singular value by power iteration on `A^T A`.
fn spectral_norm(a: &Mat<f64>) -> f64 {
    let n = a.ncols();
    let mut v = Mat::<f64>::from_fn(n, 1, |_, _| 1.0 / (n as f64).sqrt());
    let mut sigma = 0.0;
    for _ in 0..500 {
        let av = a * &v;
        let w = a.transpose() * &av;
        let norm = w.norm_l2();
        if norm == 0.0 {
            return 0.0;
        }
        let next = norm.sqrt();
        v = w * faer::Scale(1.0 / norm);
        if (next - sigma).abs() <= 1e-12 * next {
            return next;
        }
        sigma = next;
    }
    sigma
}

/// Complete `partial` starting from the fill value.
pub fn complete(partial: &PartialMatrix, config: &SolverConfig) -> Result<CompletionResult> {
    complete_from(partial, config, None)
}

/// Complete `partial`, optionally warm started from a previous estimate.
///
/// The unobserved entries of `warm` seed the first iterate; observed entries
/// always come from `partial`.
pub fn complete_from(
    partial: &PartialMatrix,
    config: &SolverConfig,
    warm: Option<&DenseMatrix>,
) -> Result<CompletionResult> {
    config.validate()?;
    let (rows, cols) = partial.dims();
    if partial.observed_count() == 0 {
        return Err(Error::DegenerateInput(
            "completion needs at least one observed entry".into(),
        ));
    }
    if let Some(w) = warm {
        if w.dims() != (rows, cols) {
            return Err(Error::DimensionMismatch {
                expected: (rows, cols),
                found: w.dims(),
            });
        }
        if !w.is_finite() {
            return Err(Error::invalid("warm start has non-finite entries"));
        }
    }
    let observed = partial.values();
    if partial
        .omega()
        .iter()
        .any(|&(i, j)| !observed[(i, j)].is_finite())
    {
        return Err(Error::invalid("observed values must be finite"));
    }

    let mask = partial.mask();
    let full_rank = rows.min(cols);
    let max_rank = config.max_rank.unwrap_or(full_rank).min(full_rank);

    let filled = partial.filled(config.fill_value);
    let lambda = match config.lambda {
        Lambda::Absolute(l) => l,
        Lambda::SpectralFraction(frac) => frac * spectral_norm(&filled.to_faer()),
    };
    let threshold = 0.5 * lambda;

    let subspace = match config.svd {
        SvdStrategy::Dense => None,
        SvdStrategy::Subspace {
            oversample,
            power_iters,
        } => Some((oversample, power_iters)),
        SvdStrategy::Auto => {
            if 4 * (max_rank + AUTO_OVERSAMPLE) <= full_rank {
                Some((AUTO_OVERSAMPLE, AUTO_POWER_ITERS))
            } else {
                None
            }
        }
    }
    .filter(|(over, _)| max_rank + over < full_rank);

    let mut x = match warm {
        Some(w) => w.clone(),
        None => filled.clone(),
    };
    let mut start_block = subspace.map(|(over, _)| {
        let mut rng = stream_rng(0, Stream::Solver, 0);
        Mat::from_fn(cols, max_rank + over, |_, _| StandardNormal.sample(&mut rng))
    });

    let mut history = Vec::new();
    let mut converged = false;
    let mut retained: Vec<f64> = Vec::new();
    let mut z = Mat::<f64>::zeros(rows, cols);

    for iter in 0..config.max_iterations {
        for i in 0..rows {
            for j in 0..cols {
                let idx = i * cols + j;
                z[(i, j)] = if mask[idx] { observed[(i, j)] } else { x.as_slice()[idx] };
            }
        }
        let context = format!("completion iteration {}", iter + 1);
        let f: Factorization = match (&subspace, &start_block) {
            (Some((_, power)), Some(start)) => {
                let extra = if iter == 0 { 2 } else { 0 };
                subspace_svd(&z, start, power + extra, &context)?
            }
            _ => dense_svd(&z, &context)?,
        };
        let shrunk = shrink_factorization(&f, threshold, max_rank, rows, cols);
        if subspace.is_some() {
            start_block = Some(f.v);
        }
        let next = DenseMatrix::from_faer(&shrunk.matrix);
        if !next.is_finite() {
            return Err(Error::Numerical {
                context: format!("{context}: non-finite iterate"),
            });
        }
        let prev_norm = x.frobenius_norm();
        let delta = next.distance(&x);
        let relative_change = if prev_norm > 0.0 {
            delta / prev_norm
        } else if delta == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        x = next;
        retained = shrunk.values;
        let residual = observed_residual(partial, x.as_slice(), cols);
        history.push(IterationRecord {
            objective: residual + lambda * retained.iter().sum::<f64>(),
            observed_residual: residual,
            relative_change,
        });
        if relative_change < config.tolerance {
            converged = true;
            break;
        }
    }

    let top = retained.first().copied().unwrap_or(0.0);
    let numeric_rank = retained
        .iter()
        .filter(|s| **s > super::DEFAULT_RANK_TOLERANCE * top)
        .count();
    let last = history.last().copied().expect("at least one iteration");
    Ok(CompletionResult {
        completed: x,
        iterations: history.len(),
        objective: last.objective,
        numeric_rank,
        converged,
        lambda,
        history,
    })
}
