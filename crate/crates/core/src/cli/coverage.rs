//! Coverage experiments: planners with and without in-loop prediction.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use rayon::prelude::*;

use super::spec::ExperimentSpec;
use super::stats::mean_std;
use super::{write_csv, Outputs};
use crate::error::{Error, Result};
use crate::planner::PlannerKind;
use crate::rng::{derive_seed, Stream};
use crate::sim::{run, CoverageTrace};

pub const SUMMARY_HEADER: [&str; 6] = ["planner", "prediction", "quantile", "mean_steps", "std_steps", "n"];
pub const DEFAULT_QUANTILES: [u32; 4] = [20, 50, 90, 100];
pub const ALL_QUANTILES: [u32; 7] = [20, 40, 50, 60, 80, 90, 100];

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageRun {
    pub planner: PlannerKind,
    pub prediction: bool,
    pub maze_seed: u64,
    pub trace: CoverageTrace,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub planner: PlannerKind,
    pub prediction: bool,
    pub quantile: u32,
    /// `None` when some run never reached the quantile.
    pub mean_std: Option<(f64, f64)>,
    pub n: usize,
}

pub fn prediction_label(on: bool) -> &'static str {
    if on {
        "on"
    } else {
        "off"
    }
}

pub(crate) fn trace_path(spec: &ExperimentSpec, dir: &std::path::Path, run: &CoverageRun) -> PathBuf {
    let label = run.planner.label().replace(':', "_");
    dir.join(format!(
        "{}_{}_{}_{}.csv",
        spec.name,
        label,
        prediction_label(run.prediction),
        run.maze_seed
    ))
}

/// Run every (planner, prediction, maze) combination. With `trace_dir`, each
/// trace is written there as soon as its run finishes.
pub fn run_coverage(spec: &ExperimentSpec, trace_dir: Option<&std::path::Path>) -> Result<Vec<CoverageRun>> {
    spec.validate()?;
    spec.validate_coverage()?;
    let mazes = super::sweep::mazes(spec)?;
    let mut jobs = Vec::new();
    for &planner in &spec.planners {
        for &prediction in spec.prediction.flags() {
            for (k, (seed, map)) in mazes.iter().enumerate() {
                jobs.push((planner, prediction, k as u64, *seed, map));
            }
        }
    }
    let results: Vec<Result<CoverageRun>> = jobs
        .par_iter()
        .map(|&(planner, prediction, k, maze_seed, truth)| {
            let ident = format!(
                "planner {} prediction {} seed {maze_seed}",
                planner.label(),
                prediction_label(prediction)
            );
            log::info!("coverage {}: {ident}", spec.name);
            let config = spec.sim_config(planner, prediction, derive_seed(spec.seed, Stream::Tour, k));
            let trace = run(truth, &config).map_err(|e| Error::invalid(format!("{ident}: {e}")))?;
            let result = CoverageRun {
                planner,
                prediction,
                maze_seed,
                trace,
            };
            if let Some(dir) = trace_dir {
                let path = trace_path(spec, dir, &result);
                let file = File::create(&path)
                    .map_err(|e| Error::io(format!("creating {}", path.display()), e))?;
                result.trace.write_csv(BufWriter::new(file))?;
            }
            Ok(result)
        })
        .collect();
    let mut runs = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(run) => runs.push(run),
            Err(e) => failures.push(e.to_string()),
        }
    }
    if !failures.is_empty() {
        return Err(Error::invalid(format!(
            "{} of {} coverage runs failed: {}",
            failures.len(),
            jobs.len(),
            failures.join("; ")
        )));
    }
    Ok(runs)
}

/// Steps to reach each quantile: accuracy with prediction, revealed
/// fraction without.
pub fn summarize(spec: &ExperimentSpec, runs: &[CoverageRun], quantiles: &[u32]) -> Vec<SummaryRow> {
    let mut rows = Vec::new();
    for &planner in &spec.planners {
        for &prediction in spec.prediction.flags() {
            let group: Vec<&CoverageRun> = runs
                .iter()
                .filter(|r| r.planner == planner && r.prediction == prediction)
                .collect();
            for &q in quantiles {
                let level = q as f64 / 100.0;
                let steps: Option<Vec<f64>> = group
                    .iter()
                    .map(|r| r.trace.steps_to_level(level, prediction).map(|s| s as f64))
                    .collect();
                rows.push(SummaryRow {
                    planner,
                    prediction,
                    quantile: q,
                    mean_std: steps.as_deref().and_then(mean_std),
                    n: group.len(),
                });
            }
        }
    }
    rows
}

pub(crate) fn summary_path(spec: &ExperimentSpec, dir: &std::path::Path) -> PathBuf {
    dir.join(format!("{}_summary.csv", spec.name))
}

pub(crate) fn summary_fields(row: &SummaryRow) -> Vec<String> {
    let (mean, std) = match row.mean_std {
        Some((m, s)) => (m.to_string(), s.to_string()),
        None => ("-".to_string(), "-".to_string()),
    };
    vec![
        row.planner.label(),
        prediction_label(row.prediction).to_string(),
        row.quantile.to_string(),
        mean,
        std,
        row.n.to_string(),
    ]
}

pub(crate) fn write_coverage(spec: &ExperimentSpec, out: &Outputs, quantiles: &[u32]) -> Result<Vec<SummaryRow>> {
    let runs = run_coverage(spec, Some(&out.dir))?;
    let summary = summarize(spec, &runs, quantiles);
    write_csv(&summary_path(spec, &out.dir), &SUMMARY_HEADER, summary.iter().map(summary_fields))?;
    Ok(summary)
}
