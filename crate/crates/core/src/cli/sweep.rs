//! Static completion sweeps over C and sampling pattern.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use super::spec::ExperimentSpec;
use super::stats::mean_std;
use super::{write_csv, Outputs};
use crate::error::{Error, Result};
use crate::mapmodel::{classify, generate_maze, EncodingScheme, FeatureMap, MazeSpec};
use crate::matcomp::{complete, sample_bound};
use crate::rng::{derive_seed, Stream};
use crate::sensing::{sample_static, SamplingPattern, SensorConfig};
use crate::sim::{ppa, tpa};

pub const RUN_HEADER: [&str; 8] = ["experiment", "seed", "C", "pattern", "revealed", "tpa", "ppa", "wall_ms"];
pub const AGGREGATE_HEADER: [&str; 7] = ["experiment", "C", "pattern", "metric", "mean", "std_dev", "n"];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub seed: u64,
    pub c: f64,
    pub pattern: SamplingPattern,
    pub revealed: f64,
    pub tpa: f64,
    /// Absent when every cell was observed.
    pub ppa: Option<f64>,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub c: f64,
    pub pattern: SamplingPattern,
    pub metric: &'static str,
    pub mean: f64,
    pub std_dev: f64,
    pub n: usize,
}

pub(crate) fn mazes(spec: &ExperimentSpec) -> Result<Vec<(u64, FeatureMap)>> {
    (0..spec.repeats as u64)
        .into_par_iter()
        .map(|k| {
            let seed = spec.maze.seed + k;
            let maze = MazeSpec { seed, ..spec.maze };
            generate_maze(&maze)
                .map(|m| (seed, m))
                .map_err(|e| Error::invalid(format!("maze seed {seed}: {e}")))
        })
        .collect()
}

fn run_one(
    spec: &ExperimentSpec,
    repeat: u64,
    maze_seed: u64,
    truth: &FeatureMap,
    c: f64,
    pattern: SamplingPattern,
) -> Result<SweepRow> {
    let scheme = EncodingScheme::default();
    let n = truth.rows().max(truth.cols());
    let bound = sample_bound(n, spec.maze.target_rank, c, spec.log_base)?;
    let target = (bound as usize).min(truth.len());
    let sensor = SensorConfig {
        rng_seed: derive_seed(spec.seed, Stream::Sampling, repeat),
        ..spec.sim.sensor
    };
    let partial = sample_static(truth, pattern, target, spec.block_size, &sensor, &scheme)?;
    let start = Instant::now();
    let result = complete(&partial, &spec.solver)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let predicted = classify(&result.completed, &scheme, truth.resolution())?;
    let ppa = match ppa(&predicted, truth, partial.omega()) {
        Ok(v) => Some(v),
        Err(Error::UndefinedMetric(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(SweepRow {
        seed: maze_seed,
        c,
        pattern,
        revealed: partial.observed_fraction(),
        tpa: tpa(&predicted, truth)?,
        ppa,
        wall_ms,
    })
}

/// Every (maze seed, C, pattern) run, in that nesting order.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    spec.validate_sweep()?;
    let mazes = mazes(spec)?;
    let mut jobs = Vec::new();
    for (k, (seed, map)) in mazes.iter().enumerate() {
        for &c in &spec.c_values {
            for &p in &spec.patterns {
                jobs.push((k as u64, *seed, map, c, p));
            }
        }
    }
    jobs.par_iter()
        .map(|&(k, seed, map, c, p)| {
            log::info!("sweep {}: seed {seed} C {c} pattern {}", spec.name, p.name());
            run_one(spec, k, seed, map, c, p).map_err(|e| {
                Error::invalid(format!("run seed {seed}, C {c}, pattern {}: {e}", p.name()))
            })
        })
        .collect()
}

/// Mean and spread of `revealed`, `tpa` and `ppa` per (C, pattern).
pub fn aggregate(spec: &ExperimentSpec, rows: &[SweepRow]) -> Vec<AggregateRow> {
    let mut out = Vec::new();
    for &c in &spec.c_values {
        for &pattern in &spec.patterns {
            let group: Vec<&SweepRow> = rows
                .iter()
                .filter(|r| r.c == c && r.pattern == pattern)
                .collect();
            let metrics: [(&'static str, Vec<f64>); 3] = [
                ("revealed", group.iter().map(|r| r.revealed).collect()),
                ("tpa", group.iter().map(|r| r.tpa).collect()),
                ("ppa", group.iter().filter_map(|r| r.ppa).collect()),
            ];
            for (metric, values) in metrics {
                if let Some((mean, std_dev)) = mean_std(&values) {
                    out.push(AggregateRow {
                        c,
                        pattern,
                        metric,
                        mean,
                        std_dev,
                        n: values.len(),
                    });
                }
            }
        }
    }
    out
}

pub(crate) fn sweep_paths(spec: &ExperimentSpec, dir: &Path) -> (PathBuf, PathBuf) {
    (
        dir.join(format!("{}_runs.csv", spec.name)),
        dir.join(format!("{}_aggregate.csv", spec.name)),
    )
}

pub(crate) fn write_sweep(spec: &ExperimentSpec, out: &Outputs) -> Result<Vec<AggregateRow>> {
    let rows = run_sweep(spec)?;
    let (runs_path, agg_path) = sweep_paths(spec, &out.dir);
    write_csv(&runs_path, &RUN_HEADER, rows.iter().map(|r| {
        vec![
            spec.name.clone(),
            r.seed.to_string(),
            r.c.to_string(),
            r.pattern.name().to_string(),
            r.revealed.to_string(),
            r.tpa.to_string(),
            r.ppa.map(|v| v.to_string()).unwrap_or_default(),
            if out.timing { format!("{:.3}", r.wall_ms) } else { String::new() },
        ]
    }))?;
    let agg = aggregate(spec, &rows);
    write_csv(&agg_path, &AGGREGATE_HEADER, agg.iter().map(|a| {
        vec![
            spec.name.clone(),
            a.c.to_string(),
            a.pattern.name().to_string(),
            a.metric.to_string(),
            a.mean.to_string(),
            a.std_dev.to_string(),
            a.n.to_string(),
        ]
    }))?;
    Ok(agg)
}
