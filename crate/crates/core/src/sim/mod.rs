//! Closed-loop coverage simulation.
//!
//! The robot starts at `(0, 0)` knowing nothing, follows its planner in
//! fixed-length action steps, senses after every step and, when enabled,
//! completes the partially known map to score the prediction.

mod metrics;

pub use metrics::{ppa, tpa};

use std::collections::VecDeque;
use std::io::Write;

use crate::error::{Error, Result};
use crate::mapmodel::{classify, encode, Cell, CellState, EncodingScheme, FeatureMap};
use crate::matcomp::{complete_from, LogBase, SolverConfig};
use crate::planner::{Plan, Planner, PlannerKind, Waypoint, DEFAULT_RANK_HINT, DEFAULT_TWO_OPT_BUDGET};
use crate::rng::{derive_seed, Stream};
use crate::sensing::{Sensor, SensorConfig};
use crate::DenseMatrix;

/// Rank cap for in-loop completions; keeps each solve on the subspace path.
pub const IN_LOOP_MAX_RANK: usize = 32;

pub const TRACE_HEADER: [&str; 7] = ["step", "row", "col", "revealed", "tpa", "ppa", "path_length"];

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub planner: PlannerKind,
    pub sensor: SensorConfig,
    pub solver: SolverConfig,
    pub scheme: EncodingScheme,
    pub max_steps: usize,
    /// Steps between in-loop completions; 0 disables prediction.
    pub predict_every: usize,
    /// Cells travelled per action step.
    pub step_length: f64,
    pub rng_seed: u64,
    /// Rank assumed by the TSP planner.
    pub rank_hint: usize,
    pub two_opt_budget: usize,
    pub log_base: LogBase,
    pub closed_tour: bool,
    /// End the run early once the prediction accuracy reaches this level.
    pub stop_at_tpa: Option<f64>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            planner: PlannerKind::Lawnmower,
            sensor: SensorConfig::default(),
            solver: SolverConfig {
                max_rank: Some(IN_LOOP_MAX_RANK),
                ..SolverConfig::default()
            },
            scheme: EncodingScheme::default(),
            max_steps: 600,
            predict_every: 1,
            step_length: 5.0,
            rng_seed: 0,
            rank_hint: DEFAULT_RANK_HINT,
            two_opt_budget: DEFAULT_TWO_OPT_BUDGET,
            log_base: LogBase::default(),
            closed_tour: true,
            stop_at_tpa: None,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_steps == 0 {
            return Err(Error::invalid("max_steps must be at least 1"));
        }
        if !(self.step_length.is_finite() && self.step_length > 0.0) {
            return Err(Error::invalid(format!(
                "step_length must be positive, got {}",
                self.step_length
            )));
        }
        if let Some(q) = self.stop_at_tpa {
            if !(0.0..=1.0).contains(&q) {
                return Err(Error::invalid(format!("stop_at_tpa must lie in [0, 1], got {q}")));
            }
        }
        self.sensor.validate()?;
        self.solver.validate()?;
        self.scheme.validate()?;
        self.planner().validate()
    }

    pub fn planner(&self) -> Planner {
        Planner {
            kind: self.planner,
            footprint_half_extent: self.sensor.footprint_half_extent,
            rank_hint: self.rank_hint,
            two_opt_budget: self.two_opt_budget,
            log_base: self.log_base,
            closed_tour: self.closed_tour,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub step: usize,
    pub pose: Cell,
    pub revealed: f64,
    pub tpa: Option<f64>,
    pub ppa: Option<f64>,
    pub path_length: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoverageTrace {
    pub records: Vec<TraceRecord>,
}

impl CoverageTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn final_revealed(&self) -> f64 {
        self.records.last().map_or(0.0, |r| r.revealed)
    }

    /// First step whose revealed fraction reaches `level`.
    pub fn steps_to_revealed(&self, level: f64) -> Option<usize> {
        self.records
            .iter()
            .find(|r| r.revealed >= level)
            .map(|r| r.step)
    }

    /// First step whose prediction accuracy reaches `level`.
    pub fn steps_to_tpa(&self, level: f64) -> Option<usize> {
        self.records
            .iter()
            .find(|r| r.tpa.is_some_and(|t| t >= level))
            .map(|r| r.step)
    }

    /// Prediction-aware progress: accuracy when scored, revealed fraction
    /// otherwise.
    pub fn steps_to_level(&self, level: f64, prediction: bool) -> Option<usize> {
        if prediction {
            self.steps_to_tpa(level)
        } else {
            self.steps_to_revealed(level)
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(TRACE_HEADER)?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.records {
            w.write_record([
                r.step.to_string(),
                r.pose.0.to_string(),
                r.pose.1.to_string(),
                r.revealed.to_string(),
                opt(r.tpa),
                opt(r.ppa),
                r.path_length.to_string(),
            ])?;
        }
        w.flush()
            .map_err(|e| Error::io("writing coverage trace", e))?;
        Ok(())
    }
}

fn to_point(w: Waypoint) -> (f64, f64) {
    (w.row as f64, w.col as f64)
}

/// Run one coverage mission against the fully known `truth`.
pub fn run(truth: &FeatureMap, config: &SimConfig) -> Result<CoverageTrace> {
    config.validate()?;
    if !truth.is_fully_known() {
        return Err(Error::invalid("ground-truth map must be fully known"));
    }
    let planner = config.planner();
    let scheme = &config.scheme;
    let (rows, cols) = truth.dims();
    let total = truth.len() as f64;
    let mut sensor = Sensor::new(SensorConfig {
        rng_seed: derive_seed(config.rng_seed, Stream::Sensing, 0),
        ..config.sensor
    })?;
    let mut known = FeatureMap::new(rows, cols, truth.resolution(), CellState::Unknown)?;
    let mut pos = (0.0f64, 0.0f64);
    let mut path_length = 0.0;
    let mut queue: VecDeque<(f64, f64)> = VecDeque::new();
    let mut goal: Option<Cell> = None;
    // routes and tours are planned once; running out of them ends the run
    let mut planned_once = false;
    let mut warm: Option<DenseMatrix> = None;
    let mut trace = CoverageTrace::default();

    for step in 1..=config.max_steps {
        if queue.is_empty() && !planned_once {
            let seed = derive_seed(config.rng_seed, Stream::Planner, step as u64);
            let pose = (pos.0.round() as usize, pos.1.round() as usize);
            match planner.plan(&known, pose, seed).map_err(|e| match e {
                Error::DegeneratePlan(msg) => {
                    Error::DegeneratePlan(format!("{} at step {step}: {msg}", planner.kind.label()))
                }
                other => other,
            })? {
                Plan::Complete => break,
                Plan::Goal(w) => {
                    goal = Some(w.cell());
                    queue.push_back(to_point(w));
                }
                Plan::Route(route) => {
                    planned_once = true;
                    queue.extend(route.into_iter().map(to_point));
                }
                Plan::Tour(tour) => {
                    planned_once = true;
                    let first = tour.order().first().copied();
                    queue.extend(tour.order().iter().copied().map(to_point));
                    if config.closed_tour {
                        queue.extend(first.map(to_point));
                    }
                }
            }
        }

        let mut budget = config.step_length;
        while budget > 0.0 {
            let Some(&target) = queue.front() else { break };
            let (dr, dc) = (target.0 - pos.0, target.1 - pos.1);
            let d = (dr * dr + dc * dc).sqrt();
            if d <= budget {
                pos = target;
                budget -= d;
                path_length += d;
                queue.pop_front();
                if goal.is_some() {
                    break;
                }
            } else {
                pos = (pos.0 + dr * budget / d, pos.1 + dc * budget / d);
                path_length += budget;
                budget = 0.0;
            }
        }
        let pose = (
            (pos.0.round() as usize).min(rows - 1),
            (pos.1.round() as usize).min(cols - 1),
        );
        for obs in sensor.sense(truth, pose, scheme)? {
            known.set(obs.cell, scheme.classify_value(obs.value));
        }
        if let Some(g) = goal {
            if known.get(g) != CellState::Unknown {
                queue.clear();
                goal = None;
            }
        }

        let revealed = known.known_count() as f64 / total;
        let (mut tpa_v, mut ppa_v) = (None, None);
        if config.predict_every > 0 && step % config.predict_every == 0 {
            let partial = encode(&known, scheme);
            let result = complete_from(&partial, &config.solver, warm.as_ref())?;
            log::debug!(
                "step {step}: completion took {} iterations (converged {}, rank {})",
                result.iterations,
                result.converged,
                result.numeric_rank
            );
            let predicted = classify(&result.completed, scheme, truth.resolution())?;
            tpa_v = Some(tpa(&predicted, truth)?);
            if !known.is_fully_known() {
                let observed: Vec<bool> = known.cells().iter().map(|s| s.is_known()).collect();
                ppa_v = Some(metrics::ppa_masked(&predicted, truth, &observed)?);
            }
            warm = Some(result.completed);
        }
        trace.records.push(TraceRecord {
            step,
            pose,
            revealed,
            tpa: tpa_v,
            ppa: ppa_v,
            path_length,
        });

        let route_done = planned_once && queue.is_empty();
        let accurate = matches!((config.stop_at_tpa, tpa_v), (Some(q), Some(t)) if t >= q);
        if known.is_fully_known() || route_done || accurate {
            break;
        }
    }
    Ok(trace)
}
