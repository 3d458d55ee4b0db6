use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// A dense matrix together with the set of observed entries.
///
/// Entries outside the observation set hold a placeholder and are never read
/// by the solver.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialMatrix {
    values: DenseMatrix,
    omega: Vec<(usize, usize)>,
    mask: Vec<bool>,
}

impl PartialMatrix {
    /// Build from values and an observation set. The set is sorted row-major;
    /// out-of-bounds or duplicate indices are rejected.
    pub fn new(values: DenseMatrix, mut omega: Vec<(usize, usize)>) -> Result<Self> {
        let (rows, cols) = values.dims();
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("partial matrix must have positive dimensions"));
        }
        let mut mask = vec![false; rows * cols];
        for &(i, j) in &omega {
            if i >= rows || j >= cols {
                return Err(Error::invalid(format!(
                    "observed index ({i}, {j}) outside {rows}x{cols}"
                )));
            }
            let slot = &mut mask[i * cols + j];
            if *slot {
                return Err(Error::invalid(format!("duplicate observed index ({i}, {j})")));
            }
            *slot = true;
        }
        omega.sort_unstable();
        Ok(Self {
            values,
            omega,
            mask,
        })
    }

    /// Every entry observed.
    pub fn fully_observed(values: DenseMatrix) -> Self {
        let (rows, cols) = values.dims();
        let omega = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .collect();
        Self {
            values,
            omega,
            mask: vec![true; rows * cols],
        }
    }

    /// Build from `(row, col, value)` triples; unobserved entries hold `fill`.
    pub fn from_observations(
        rows: usize,
        cols: usize,
        fill: f64,
        observations: impl IntoIterator<Item = ((usize, usize), f64)>,
    ) -> Result<Self> {
        let mut values = DenseMatrix::filled(rows, cols, fill);
        let mut omega = Vec::new();
        for ((i, j), v) in observations {
            if i < rows && j < cols {
                values[(i, j)] = v;
            }
            omega.push((i, j));
        }
        Self::new(values, omega)
    }

    pub fn n_rows(&self) -> usize {
        self.values.rows()
    }

    pub fn n_cols(&self) -> usize {
        self.values.cols()
    }

    pub fn dims(&self) -> (usize, usize) {
        self.values.dims()
    }

    pub fn values(&self) -> &DenseMatrix {
        &self.values
    }

    /// Observed indices in row-major order.
    pub fn omega(&self) -> &[(usize, usize)] {
        &self.omega
    }

    pub fn is_observed(&self, i: usize, j: usize) -> bool {
        self.mask[i * self.values.cols() + j]
    }

    pub(crate) fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn observed_count(&self) -> usize {
        self.omega.len()
    }

    pub fn observed_fraction(&self) -> f64 {
        self.omega.len() as f64 / (self.n_rows() * self.n_cols()) as f64
    }

    /// Values with every unobserved entry replaced by `fill`.
    pub fn filled(&self, fill: f64) -> DenseMatrix {
        let mut out = self.values.clone();
        for (v, &seen) in out.as_mut_slice().iter_mut().zip(&self.mask) {
            if !seen {
                *v = fill;
            }
        }
        out
    }
}
