use crate::error::{Error, Result};

/// Logarithm base for the sampling bound `C n^1.2 r log n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Log10,
    Natural,
}

impl LogBase {
    fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Log10 => x.log10(),
            LogBase::Natural => x.ln(),
        }
    }
}

/// Pre-ceiling value `C * n^1.2 * r * log(n)`.
pub fn sample_bound_value(n: usize, r: usize, coefficient_c: f64, base: LogBase) -> Result<f64> {
    if n < 2 {
        return Err(Error::invalid(format!("sample bound needs n >= 2, got {n}")));
    }
    if r < 1 {
        return Err(Error::invalid("sample bound needs r >= 1"));
    }
    if !(coefficient_c > 0.0 && coefficient_c.is_finite()) {
        return Err(Error::invalid(format!(
            "coefficient C must be positive and finite, got {coefficient_c}"
        )));
    }
    let n = n as f64;
    Ok(coefficient_c * n.powf(1.2) * r as f64 * base.log(n))
}

/// Number of sampled entries `m = ceil(C * n^1.2 * r * log n)`.
pub fn sample_bound(n: usize, r: usize, coefficient_c: f64, base: LogBase) -> Result<u64> {
    Ok(sample_bound_value(n, r, coefficient_c, base)?.ceil() as u64)
}
