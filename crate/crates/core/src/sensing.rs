//! Observation models.
//!
//! [`Sensor`] reads a square `(2h+1) x (2h+1)` footprint around the robot,
//! either perfectly or with independent per-cell dropout. [`sample_static`]
//! draws whole-map observation sets for offline completion benchmarks.

use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::mapmodel::{Cell, EncodingScheme, FeatureMap};
use crate::matcomp::PartialMatrix;
use crate::rng::{stream_rng, SimRng, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SensingMode {
    /// Every footprint cell is observed.
    #[default]
    Perfect,
    /// Each footprint cell is independently dropped with `dls_drop_rate`.
    Degraded,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorConfig {
    pub footprint_half_extent: usize,
    pub mode: SensingMode,
    pub dls_drop_rate: f64,
    /// Flip probability for the noisy static pattern.
    pub noise_flip_rate: f64,
    pub rng_seed: u64,
}

impl Default for SensorConfig {
    fn default() -> Self {
        Self {
            footprint_half_extent: 5,
            mode: SensingMode::Perfect,
            dls_drop_rate: 0.25,
            noise_flip_rate: 0.05,
            rng_seed: 0,
        }
    }
}

impl SensorConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, rate) in [
            ("dls_drop_rate", self.dls_drop_rate),
            ("noise_flip_rate", self.noise_flip_rate),
        ] {
            if !(0.0..1.0).contains(&rate) {
                return Err(Error::invalid(format!("{name} must lie in [0, 1), got {rate}")));
            }
        }
        Ok(())
    }

    /// Side length of the square footprint.
    pub fn footprint_side(&self) -> usize {
        2 * self.footprint_half_extent + 1
    }

    pub fn footprint_cells(&self) -> usize {
        self.footprint_side() * self.footprint_side()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub cell: Cell,
    pub value: f64,
}

/// A stateful footprint sensor; successive reads continue one seeded stream.
#[derive(Debug, Clone)]
pub struct Sensor {
    config: SensorConfig,
    rng: SimRng,
}

impl Sensor {
    pub fn new(config: SensorConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            rng: stream_rng(config.rng_seed, Stream::Sensing, 0),
        })
    }

    pub fn config(&self) -> &SensorConfig {
        &self.config
    }

    /// Read the footprint around `pose`, clipped at the map border.
    ///
    /// Unknown truth cells yield no observation. Under degraded sensing one
    /// uniform draw is consumed per in-bounds footprint cell, in row-major
    /// order.
    pub fn sense(
        &mut self,
        truth: &FeatureMap,
        pose: Cell,
        scheme: &EncodingScheme,
    ) -> Result<Vec<Observation>> {
        if !truth.in_bounds(pose) {
            return Err(Error::invalid(format!(
                "pose {pose:?} outside {}x{} map",
                truth.rows(),
                truth.cols()
            )));
        }
        let h = self.config.footprint_half_extent;
        let (r0, r1) = (pose.0.saturating_sub(h), (pose.0 + h).min(truth.rows() - 1));
        let (c0, c1) = (pose.1.saturating_sub(h), (pose.1 + h).min(truth.cols() - 1));
        let mut out = Vec::with_capacity((r1 - r0 + 1) * (c1 - c0 + 1));
        for r in r0..=r1 {
            for c in c0..=c1 {
                if self.config.mode == SensingMode::Degraded
                    && self.rng.random::<f64>() < self.config.dls_drop_rate
                {
                    continue;
                }
                if let Some(value) = scheme.value_of(truth.get((r, c))) {
                    out.push(Observation {
                        cell: (r, c),
                        value,
                    });
                }
            }
        }
        Ok(out)
    }
}

/// One-shot footprint read seeded from `config.rng_seed`.
pub fn sense(
    truth: &FeatureMap,
    pose: Cell,
    config: &SensorConfig,
    scheme: &EncodingScheme,
) -> Result<Vec<Observation>> {
    Sensor::new(*config)?.sense(truth, pose, scheme)
}

/// Whole-map observation patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SamplingPattern {
    /// Distinct cells uniformly at random.
    UniformRandom,
    /// Disjoint aligned blocks drawn at random until the count is met.
    BlockedUniform,
    /// Uniform cells with binary values flipped at `noise_flip_rate`.
    NoisyUniform,
}

impl SamplingPattern {
    pub fn name(self) -> &'static str {
        match self {
            SamplingPattern::UniformRandom => "uniform",
            SamplingPattern::BlockedUniform => "blocked",
            SamplingPattern::NoisyUniform => "noisy",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "uniform" | "us" => Some(SamplingPattern::UniformRandom),
            "blocked" | "bus" | "po" => Some(SamplingPattern::BlockedUniform),
            "noisy" | "no" => Some(SamplingPattern::NoisyUniform),
            _ => None,
        }
    }
}

/// Draw a static observation set over a fully known map.
pub fn sample_static(
    truth: &FeatureMap,
    pattern: SamplingPattern,
    target_count: usize,
    block_size: usize,
    config: &SensorConfig,
    scheme: &EncodingScheme,
) -> Result<PartialMatrix> {
    config.validate()?;
    let (rows, cols) = truth.dims();
    let total = rows * cols;
    if target_count == 0 || target_count > total {
        return Err(Error::invalid(format!(
            "target_count must be in 1..={total}, got {target_count}"
        )));
    }
    if !truth.is_fully_known() {
        return Err(Error::invalid("static sampling needs a fully known map"));
    }
    let mut rng = stream_rng(config.rng_seed, Stream::Sampling, 0);
    let mut picked: Vec<usize> = match pattern {
        SamplingPattern::UniformRandom | SamplingPattern::NoisyUniform => {
            index::sample(&mut rng, total, target_count).into_vec()
        }
        SamplingPattern::BlockedUniform => {
            if block_size == 0 || block_size > rows.min(cols) {
                return Err(Error::invalid(format!(
                    "block size {block_size} cannot tile a {rows}x{cols} map"
                )));
            }
            let mut tiles: Vec<Cell> = (0..rows.div_ceil(block_size))
                .flat_map(|bi| (0..cols.div_ceil(block_size)).map(move |bj| (bi, bj)))
                .collect();
            tiles.shuffle(&mut rng);
            let mut cells = Vec::with_capacity(target_count + block_size * block_size);
            for (bi, bj) in tiles {
                if cells.len() >= target_count {
                    break;
                }
                let (r0, c0) = (bi * block_size, bj * block_size);
                for r in r0..(r0 + block_size).min(rows) {
                    for c in c0..(c0 + block_size).min(cols) {
                        cells.push(r * cols + c);
                    }
                }
            }
            cells
        }
    };
    picked.sort_unstable();

    let mut values = DenseMatrix::zeros(rows, cols);
    let mut omega = Vec::with_capacity(picked.len());
    for &k in &picked {
        let cell = (k / cols, k % cols);
        let mut v = scheme.value_of(truth.get(cell)).expect("fully known map");
        if pattern == SamplingPattern::NoisyUniform && rng.random::<f64>() < config.noise_flip_rate {
            v = scheme.flipped(v);
        }
        values[cell] = v;
        omega.push(cell);
    }
    PartialMatrix::new(values, omega)
}
