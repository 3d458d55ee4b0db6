//! Prediction accuracy metrics.

use crate::error::{Error, Result};
use crate::mapmodel::{Cell, CellState, FeatureMap};

fn check_pair(predicted: &FeatureMap, truth: &FeatureMap) -> Result<()> {
    if predicted.dims() != truth.dims() {
        return Err(Error::DimensionMismatch {
            expected: truth.dims(),
            found: predicted.dims(),
        });
    }
    if predicted.count(CellState::Unknown) > 0 {
        return Err(Error::invalid("predicted map must not contain unknown cells"));
    }
    Ok(())
}

/// Fraction of all cells where the prediction matches the truth.
pub fn tpa(predicted: &FeatureMap, truth: &FeatureMap) -> Result<f64> {
    check_pair(predicted, truth)?;
    let hits = predicted
        .cells()
        .iter()
        .zip(truth.cells())
        .filter(|(p, t)| p == t)
        .count();
    Ok(hits as f64 / truth.len() as f64)
}

/// Fraction of cells outside `omega` where the prediction matches the truth.
pub fn ppa(predicted: &FeatureMap, truth: &FeatureMap, omega: &[Cell]) -> Result<f64> {
    check_pair(predicted, truth)?;
    let cols = truth.cols();
    let mut observed = vec![false; truth.len()];
    for &cell in omega {
        if !truth.in_bounds(cell) {
            return Err(Error::invalid(format!("observed cell {cell:?} out of bounds")));
        }
        observed[cell.0 * cols + cell.1] = true;
    }
    ppa_masked(predicted, truth, &observed)
}

pub(crate) fn ppa_masked(predicted: &FeatureMap, truth: &FeatureMap, observed: &[bool]) -> Result<f64> {
    let mut total = 0usize;
    let mut hits = 0usize;
    for ((p, t), seen) in predicted.cells().iter().zip(truth.cells()).zip(observed) {
        if !seen {
            total += 1;
            hits += (p == t) as usize;
        }
    }
    if total == 0 {
        return Err(Error::UndefinedMetric(
            "pure prediction accuracy needs at least one unobserved cell".into(),
        ));
    }
    Ok(hits as f64 / total as f64)
}
