//! Dense matrix container and the SVD routines behind the completion solver.

use std::fmt;
use std::ops::{Index, IndexMut};

use faer::Mat;

use crate::error::{Error, Result};

/// Row-major dense real matrix.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, 0.0)
    }

    pub fn filled(rows: usize, cols: usize, value: f64) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Build from row-major data. Fails if the length does not match.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::invalid(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { 0.0 })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Frobenius norm of `self - other`.
    pub fn distance(&self, other: &DenseMatrix) -> f64 {
        debug_assert_eq!(self.dims(), other.dims());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub(crate) fn to_faer(&self) -> Mat<f64> {
        Mat::from_fn(self.rows, self.cols, |i, j| self.data[i * self.cols + j])
    }

    pub(crate) fn from_faer(m: &Mat<f64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(8) {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let shown: Vec<String> = row.iter().take(8).map(|v| format!("{v:.4}")).collect();
            writeln!(f, "  {}", shown.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Singular triplets, descending by singular value.
pub(crate) struct Factorization {
    pub u: Mat<f64>,
    pub s: Vec<f64>,
    pub v: Mat<f64>,
}

/// Thin SVD of a dense matrix, triplets sorted by descending singular value.
///
/// faer does not always return sorted singular values for exactly low-rank
/// inputs (deflated values can land anywhere), so the order is enforced here.
pub(crate) fn dense_svd(a: &Mat<f64>, context: &str) -> Result<Factorization> {
    // faer's divide and conquer occasionally stalls on very sparse inputs;
    // the transpose usually converges, and the Gram eigenproblem always does
    let (raw, u, v) = match a.thin_svd() {
        Ok(svd) => (diag_values(svd.S()), svd.U().to_owned(), svd.V().to_owned()),
        Err(_) => match a.transpose().thin_svd() {
            Ok(svd) => (diag_values(svd.S()), svd.V().to_owned(), svd.U().to_owned()),
            Err(_) => gram_svd(a, context)?,
        },
    };
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&x, &y| raw[y].total_cmp(&raw[x]).then(x.cmp(&y)));
    Ok(Factorization {
        u: Mat::from_fn(u.nrows(), order.len(), |i, k| u[(i, order[k])]),
        s: order.iter().map(|&k| raw[k]).collect(),
        v: Mat::from_fn(v.nrows(), order.len(), |i, k| v[(i, order[k])]),
    })
}

fn diag_values(d: faer::diag::DiagRef<'_, f64>) -> Vec<f64> {
    d.column_vector().iter().copied().collect()
}

/// SVD through the eigendecomposition of the smaller Gram matrix.
fn gram_svd(a: &Mat<f64>, context: &str) -> Result<(Vec<f64>, Mat<f64>, Mat<f64>)> {
    let tall = a.nrows() >= a.ncols();
    let gram = if tall { a.transpose() * a } else { a * a.transpose() };
    let evd = gram
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::Numerical {
            context: format!("{context}: dense SVD did not converge ({e:?})"),
        })?;
    let w = evd.U().to_owned();
    let s: Vec<f64> = evd
        .S()
        .column_vector()
        .iter()
        .map(|l| l.max(0.0).sqrt())
        .collect();
    let other = if tall { a * &w } else { a.transpose() * &w };
    let top = s.iter().copied().fold(0.0, f64::max);
    let mut z = other;
    for (k, &sk) in s.iter().enumerate() {
        let scale = if sk > 1e-12 * top && sk > 0.0 { 1.0 / sk } else { 0.0 };
        for i in 0..z.nrows() {
            z[(i, k)] *= scale;
        }
    }
    Ok(if tall { (s, z, w) } else { (s, w, z) })
}

fn thin_q(y: &Mat<f64>) -> Mat<f64> {
    y.qr().compute_thin_Q()
}

/// Approximate leading singular triplets by block subspace iteration.
///
/// `start` is an `ncols x b` block whose span seeds the right subspace; the
/// returned factorization carries the full `b` triplets so the caller can
/// reuse `v` as the next start block.
pub(crate) fn subspace_svd(
    a: &Mat<f64>,
    start: &Mat<f64>,
    power_iters: usize,
    context: &str,
) -> Result<Factorization> {
    debug_assert_eq!(start.nrows(), a.ncols());
    let mut q = thin_q(&(a * start));
    for _ in 0..power_iters {
        let w = thin_q(&(a.transpose() * &q));
        q = thin_q(&(a * &w));
    }
    let b = q.transpose() * a;
    let small = dense_svd(&b, context)?;
    Ok(Factorization {
        u: &q * &small.u,
        s: small.s,
        v: small.v,
    })
}
