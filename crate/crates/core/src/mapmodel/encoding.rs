use super::{CellState, FeatureMap};
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::matcomp::PartialMatrix;

/// Value convention for map matrices.
///
/// Free space is encoded away from zero so that the solver's zero fill for
/// missing entries stays distinguishable from observed free cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncodingScheme {
    pub featured_value: f64,
    pub free_value: f64,
    /// Values at or above this classify as featured.
    pub classification_threshold: f64,
}

impl Default for EncodingScheme {
    fn default() -> Self {
        Self {
            featured_value: 1.0,
            free_value: 0.2,
            classification_threshold: 0.6,
        }
    }
}

impl EncodingScheme {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = (
            self.free_value.min(self.featured_value),
            self.free_value.max(self.featured_value),
        );
        if !(self.featured_value.is_finite() && self.free_value.is_finite()) || lo == hi {
            return Err(Error::invalid("featured and free values must be distinct and finite"));
        }
        let t = self.classification_threshold;
        if !(t > lo && t < hi) {
            return Err(Error::invalid(format!(
                "classification threshold {t} must lie strictly between {lo} and {hi}"
            )));
        }
        Ok(())
    }

    pub fn value_of(&self, state: CellState) -> Option<f64> {
        match state {
            CellState::Featured => Some(self.featured_value),
            CellState::Free => Some(self.free_value),
            CellState::Unknown => None,
        }
    }

    /// Featured iff the value lies on the featured side of the threshold
    /// (ties go to featured).
    pub fn classify_value(&self, v: f64) -> CellState {
        let featured_high = self.featured_value > self.free_value;
        let featured = if featured_high {
            v >= self.classification_threshold
        } else {
            v <= self.classification_threshold
        };
        if featured {
            CellState::Featured
        } else {
            CellState::Free
        }
    }

    /// The opposite binary value, used for flip noise.
    pub fn flipped(&self, v: f64) -> f64 {
        match self.classify_value(v) {
            CellState::Featured => self.free_value,
            _ => self.featured_value,
        }
    }
}

/// Encode known cells as observed entries; unknown cells are left out of the
/// observation set and hold 0.
pub fn encode(map: &FeatureMap, scheme: &EncodingScheme) -> PartialMatrix {
    let (rows, cols) = map.dims();
    PartialMatrix::from_observations(
        rows,
        cols,
        0.0,
        map.iter()
            .filter_map(|(cell, s)| scheme.value_of(s).map(|v| (cell, v))),
    )
    .expect("map cells are in bounds and unique")
}

/// Inverse of [`encode`]: observed entries classify, the rest are unknown.
pub fn decode(partial: &PartialMatrix, scheme: &EncodingScheme, resolution: f64) -> Result<FeatureMap> {
    let (rows, cols) = partial.dims();
    let mut map = FeatureMap::new(rows, cols, resolution, CellState::Unknown)?;
    for &(i, j) in partial.omega() {
        map.set((i, j), scheme.classify_value(partial.values()[(i, j)]));
    }
    Ok(map)
}

/// Binarize a completed matrix into a fully known map.
pub fn classify(completed: &DenseMatrix, scheme: &EncodingScheme, resolution: f64) -> Result<FeatureMap> {
    if !completed.is_finite() {
        return Err(Error::invalid("cannot classify a matrix with non-finite entries"));
    }
    let (rows, cols) = completed.dims();
    let cells = completed
        .as_slice()
        .iter()
        .map(|v| scheme.classify_value(*v))
        .collect();
    FeatureMap::from_cells(rows, cols, resolution, cells)
}
