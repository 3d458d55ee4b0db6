//! Experiment specs in a flat `key = value` format.
//!
//! Blank lines and lines starting with `#` are ignored. Keys use dotted
//! sections (`maze.rows`, `sweep.c_values`, ...). Every key is optional;
//! missing keys take the defaults of [`ExperimentSpec::default`]. Lists are
//! comma separated.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mapmodel::MazeSpec;
use crate::matcomp::{Lambda, LogBase, SolverConfig};
use crate::planner::PlannerKind;
use crate::sensing::{SamplingPattern, SensingMode};
use crate::sim::SimConfig;

/// Which coverage runs to perform for each planner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PredictionMode {
    Off,
    On,
    #[default]
    Both,
}

impl PredictionMode {
    pub fn name(self) -> &'static str {
        match self {
            PredictionMode::Off => "off",
            PredictionMode::On => "on",
            PredictionMode::Both => "both",
        }
    }

    pub fn flags(self) -> &'static [bool] {
        match self {
            PredictionMode::Off => &[false],
            PredictionMode::On => &[true],
            PredictionMode::Both => &[false, true],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    /// Base seed for sampling, sensing and planning streams.
    pub seed: u64,
    /// Maze for repeat `k` uses `maze.seed + k`.
    pub maze: MazeSpec,
    pub repeats: usize,
    pub c_values: Vec<f64>,
    pub patterns: Vec<SamplingPattern>,
    pub block_size: usize,
    pub log_base: LogBase,
    pub planners: Vec<PlannerKind>,
    pub prediction: PredictionMode,
    /// Simulation settings; `planner` and `rng_seed` are set per run.
    pub sim: SimConfig,
    pub solver: SolverConfig,
    pub output_dir: PathBuf,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        let solver = SolverConfig::default();
        Self {
            name: "experiment".into(),
            seed: 0,
            maze: MazeSpec {
                rows: 200,
                cols: 200,
                target_rank: 11,
                corridor_width: 4,
                seed: 0,
            },
            repeats: 1,
            c_values: vec![0.5, 1.0, 1.5, 2.0],
            patterns: vec![SamplingPattern::UniformRandom, SamplingPattern::BlockedUniform],
            block_size: 10,
            log_base: LogBase::Log10,
            planners: vec![
                PlannerKind::Lawnmower,
                PlannerKind::MyopicGreedy,
                PlannerKind::TspEps {
                    epsilon: 0.5,
                    coefficient_c: 2.0,
                },
            ],
            prediction: PredictionMode::Both,
            sim: SimConfig::default(),
            solver,
            output_dir: PathBuf::from("."),
        }
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse::<T>()
        .map_err(|_| Error::config(key, format!("cannot parse `{value}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::config(key, format!("expected true or false, got `{value}`"))),
    }
}

fn parse_optional<T: FromStr>(key: &str, value: &str) -> Result<Option<T>> {
    if value == "none" {
        Ok(None)
    } else {
        parse_num(key, value).map(Some)
    }
}

fn parse_list<T>(value: &str, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value.split(',').map(|s| item(s.trim())).collect()
}

fn join<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(",")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "none".to_string(), |x| x.to_string())
}

impl ExperimentSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut spec = Self::default();
        let mut seen = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(Error::config(key, format!("duplicate key on line {}", idx + 1)));
            }
            spec.set(key, value)?;
        }
        spec.validate()?;
        Ok(spec)
    }

    /// Apply one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let s = &mut self.sim;
        match key {
            "name" => self.name = value.to_string(),
            "seed" => self.seed = parse_num(key, value)?,
            "output_dir" => self.output_dir = PathBuf::from(value),
            "repeats" => self.repeats = parse_num(key, value)?,
            "maze.rows" => self.maze.rows = parse_num(key, value)?,
            "maze.cols" => self.maze.cols = parse_num(key, value)?,
            "maze.rank" => self.maze.target_rank = parse_num(key, value)?,
            "maze.corridor_width" => self.maze.corridor_width = parse_num(key, value)?,
            "maze.seed" => self.maze.seed = parse_num(key, value)?,
            "sweep.c_values" => self.c_values = parse_list(value, |v| parse_num(key, v))?,
            "sweep.patterns" => {
                self.patterns = parse_list(value, |v| {
                    SamplingPattern::from_name(v)
                        .ok_or_else(|| Error::config(key, format!("unknown pattern `{v}`")))
                })?
            }
            "sweep.block_size" => self.block_size = parse_num(key, value)?,
            "sweep.log_base" => {
                self.log_base = match value {
                    "log10" | "10" => LogBase::Log10,
                    "ln" | "e" => LogBase::Natural,
                    _ => return Err(Error::config(key, format!("expected log10 or ln, got `{value}`"))),
                }
            }
            "coverage.planners" => {
                self.planners = parse_list(value, |v| {
                    PlannerKind::parse(v).map_err(|e| Error::config(key, e.to_string()))
                })?
            }
            "coverage.prediction" => {
                self.prediction = match value {
                    "off" => PredictionMode::Off,
                    "on" => PredictionMode::On,
                    "both" => PredictionMode::Both,
                    _ => return Err(Error::config(key, format!("expected off, on or both, got `{value}`"))),
                }
            }
            "sim.max_steps" => s.max_steps = parse_num(key, value)?,
            "sim.predict_every" => s.predict_every = parse_num(key, value)?,
            "sim.step_length" => s.step_length = parse_num(key, value)?,
            "sim.footprint_half_extent" => s.sensor.footprint_half_extent = parse_num(key, value)?,
            "sim.mode" => {
                s.sensor.mode = match value {
                    "pls" | "perfect" => SensingMode::Perfect,
                    "dls" | "degraded" => SensingMode::Degraded,
                    _ => return Err(Error::config(key, format!("expected pls or dls, got `{value}`"))),
                }
            }
            "sim.dls_drop_rate" => s.sensor.dls_drop_rate = parse_num(key, value)?,
            "sim.noise_flip_rate" => s.sensor.noise_flip_rate = parse_num(key, value)?,
            "sim.rank_hint" => s.rank_hint = parse_num(key, value)?,
            "sim.two_opt_budget" => s.two_opt_budget = parse_num(key, value)?,
            "sim.closed_tour" => s.closed_tour = parse_bool(key, value)?,
            "sim.stop_at_tpa" => s.stop_at_tpa = parse_optional(key, value)?,
            "sim.max_rank" => s.solver.max_rank = parse_optional(key, value)?,
            "solver.lambda" => {
                self.solver.lambda = Lambda::Absolute(parse_num(key, value)?);
            }
            "solver.lambda_fraction" => {
                self.solver.lambda = Lambda::SpectralFraction(parse_num(key, value)?);
            }
            "solver.tolerance" => self.solver.tolerance = parse_num(key, value)?,
            "solver.max_iterations" => self.solver.max_iterations = parse_num(key, value)?,
            "solver.max_rank" => self.solver.max_rank = parse_optional(key, value)?,
            _ => return Err(Error::config(key, "unknown key")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        fn wrap(key: &'static str) -> impl Fn(Error) -> Error {
            move |e| Error::config(key, e.to_string())
        }
        if self.name.is_empty()
            || self.name.trim() != self.name
            || self.name.contains(['/', '\\', ',', '\n', '\r'])
        {
            return Err(Error::config("name", "must be non-empty and trimmed, without `/`, `\\` or `,`"));
        }
        if self.repeats == 0 {
            return Err(Error::config("repeats", "must be at least 1"));
        }
        self.maze.validate().map_err(wrap("maze"))?;
        if let Some(c) = self.c_values.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
            return Err(Error::config("sweep.c_values", format!("C must be positive, got {c}")));
        }
        if self.block_size == 0 {
            return Err(Error::config("sweep.block_size", "must be positive"));
        }
        for p in &self.planners {
            p.validate().map_err(wrap("coverage.planners"))?;
        }
        self.solver.validate().map_err(wrap("solver"))?;
        self.sim.validate().map_err(wrap("sim"))?;
        Ok(())
    }

    /// Sweeps need at least one C value and one pattern.
    pub fn validate_sweep(&self) -> Result<()> {
        if self.c_values.is_empty() {
            return Err(Error::config("sweep.c_values", "must not be empty for a sweep"));
        }
        if self.patterns.is_empty() {
            return Err(Error::config("sweep.patterns", "must not be empty for a sweep"));
        }
        Ok(())
    }

    pub fn validate_coverage(&self) -> Result<()> {
        if self.planners.is_empty() {
            return Err(Error::config("coverage.planners", "must not be empty for coverage"));
        }
        Ok(())
    }

    /// Canonical text form; [`ExperimentSpec::parse`] reads it back unchanged.
    pub fn to_text(&self) -> String {
        let s = &self.sim;
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        put("name", self.name.clone());
        put("seed", self.seed.to_string());
        put("output_dir", self.output_dir.display().to_string());
        put("repeats", self.repeats.to_string());
        put("maze.rows", self.maze.rows.to_string());
        put("maze.cols", self.maze.cols.to_string());
        put("maze.rank", self.maze.target_rank.to_string());
        put("maze.corridor_width", self.maze.corridor_width.to_string());
        put("maze.seed", self.maze.seed.to_string());
        put("sweep.c_values", join(&self.c_values, |c| c.to_string()));
        put("sweep.patterns", join(&self.patterns, |p| p.name().to_string()));
        put("sweep.block_size", self.block_size.to_string());
        put(
            "sweep.log_base",
            match self.log_base {
                LogBase::Log10 => "log10",
                LogBase::Natural => "ln",
            }
            .into(),
        );
        put("coverage.planners", join(&self.planners, |p| p.label()));
        put("coverage.prediction", self.prediction.name().into());
        put("sim.max_steps", s.max_steps.to_string());
        put("sim.predict_every", s.predict_every.to_string());
        put("sim.step_length", s.step_length.to_string());
        put("sim.footprint_half_extent", s.sensor.footprint_half_extent.to_string());
        put(
            "sim.mode",
            match s.sensor.mode {
                SensingMode::Perfect => "pls",
                SensingMode::Degraded => "dls",
            }
            .into(),
        );
        put("sim.dls_drop_rate", s.sensor.dls_drop_rate.to_string());
        put("sim.noise_flip_rate", s.sensor.noise_flip_rate.to_string());
        put("sim.rank_hint", s.rank_hint.to_string());
        put("sim.two_opt_budget", s.two_opt_budget.to_string());
        put("sim.closed_tour", s.closed_tour.to_string());
        put("sim.stop_at_tpa", opt(s.stop_at_tpa));
        put("sim.max_rank", opt(s.solver.max_rank));
        match self.solver.lambda {
            Lambda::Absolute(l) => put("solver.lambda", l.to_string()),
            Lambda::SpectralFraction(f) => put("solver.lambda_fraction", f.to_string()),
        }
        put("solver.tolerance", self.solver.tolerance.to_string());
        put("solver.max_iterations", self.solver.max_iterations.to_string());
        put("solver.max_rank", opt(self.solver.max_rank));
        out
    }

    /// Simulation config for one coverage run.
    pub fn sim_config(&self, planner: PlannerKind, prediction: bool, rng_seed: u64) -> SimConfig {
        let mut solver = self.solver.clone();
        solver.max_rank = self.solver.max_rank.or(self.sim.solver.max_rank);
        SimConfig {
            planner,
            solver,
            predict_every: if prediction { self.sim.predict_every.max(1) } else { 0 },
            rng_seed,
            ..self.sim.clone()
        }
    }
}
