//! The `lrmc` command-line harness.
//!
//! Subcommands: `generate`, `analyze`, `complete`, `sweep` and `coverage`.
//! Global flags `--seed`, `--output-dir`, `--print-config` and `--no-timing`
//! apply to all of them; `LRMC_THREADS` caps the worker pool.

mod coverage;
mod spec;
mod stats;
mod sweep;

pub use coverage::{
    prediction_label, run_coverage, summarize, CoverageRun, SummaryRow, ALL_QUANTILES, DEFAULT_QUANTILES,
    SUMMARY_HEADER,
};
pub use spec::{ExperimentSpec, PredictionMode};
pub use stats::mean_std;
pub use sweep::{aggregate, run_sweep, AggregateRow, SweepRow, AGGREGATE_HEADER, RUN_HEADER};

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::mapmodel::{
    classify, encode, generate_maze_report, load_map, save_map, CellState, EncodingScheme, FeatureMap, MazeSpec,
};
use crate::matcomp::{complete, structure_report, Lambda, SolverConfig, DEFAULT_RANK_TOLERANCE};
use crate::sensing::{sample_static, SamplingPattern, SensorConfig};
use crate::sim::{ppa, tpa};

#[derive(Debug, Parser)]
#[command(name = "lrmc", version, about = "Low-rank map completion and coverage experiments")]
struct Cli {
    /// Base seed (maze seed for `generate`, sampling seed for `complete`).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for generated files.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Print the resolved configuration and exit.
    #[arg(long, global = true)]
    print_config: bool,
    /// Leave wall-clock columns empty so output files are reproducible.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a maze map with a target rank.
    Generate(GenerateArgs),
    /// Report rank, coherence and singular values of a map.
    Analyze { map: PathBuf },
    /// Complete a partially known map.
    Complete(CompleteArgs),
    /// Static completion sweep over C and sampling patterns.
    Sweep { spec: PathBuf },
    /// Coverage runs for each planner, with and without prediction.
    Coverage {
        spec: PathBuf,
        /// Report every quantile column (20, 40, 50, 60, 80, 90, 100).
        #[arg(long)]
        all_quantiles: bool,
    },
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 200)]
    rows: usize,
    #[arg(long, default_value_t = 200)]
    cols: usize,
    #[arg(long, default_value_t = 11)]
    rank: usize,
    #[arg(long, default_value_t = 4)]
    corridor_width: usize,
    /// Output file; defaults to `maze_r<rank>_s<seed>.map` in the output directory.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompleteArgs {
    map: PathBuf,
    /// Absolute regularization weight.
    #[arg(long, conflicts_with = "lambda_fraction")]
    lambda: Option<f64>,
    /// Regularization weight as a fraction of the largest singular value.
    #[arg(long)]
    lambda_fraction: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// For fully known maps: observe this fraction uniformly and score the result.
    #[arg(long)]
    observe: Option<f64>,
    /// Output file; defaults to `<stem>_completed.map` in the output directory.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Where and how result files are written.
#[derive(Debug, Clone)]
pub(crate) struct Outputs {
    pub dir: PathBuf,
    pub timing: bool,
}

pub(crate) fn write_csv(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(format!("creating {}", path.display()), e))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("LRMC_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|t| *t > 0)
        .ok_or_else(|| Error::config("LRMC_THREADS", format!("expected a positive integer, got `{raw}`")))?;
    // a pool may already exist when called twice in one process
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn load_spec(path: &Path, cli: &Cli) -> Result<ExperimentSpec> {
    let text = String::from_utf8(read_file(path)?)
        .map_err(|_| Error::invalid(format!("{} is not UTF-8", path.display())))?;
    let mut spec = ExperimentSpec::parse(&text)?;
    if let Some(seed) = cli.seed {
        spec.seed = seed;
    }
    if let Some(dir) = &cli.output_dir {
        spec.output_dir = dir.clone();
    }
    Ok(spec)
}

fn cmd_generate(cli: &Cli, args: &GenerateArgs) -> Result<()> {
    let spec = MazeSpec {
        rows: args.rows,
        cols: args.cols,
        target_rank: args.rank,
        corridor_width: args.corridor_width,
        seed: cli.seed.unwrap_or(0),
    };
    if cli.print_config {
        println!("maze.rows = {}", spec.rows);
        println!("maze.cols = {}", spec.cols);
        println!("maze.rank = {}", spec.target_rank);
        println!("maze.corridor_width = {}", spec.corridor_width);
        println!("maze.seed = {}", spec.seed);
        return Ok(());
    }
    spec.validate()?;
    let report = generate_maze_report(&spec)?;
    let values = encode(&report.map, &EncodingScheme::default()).filled(0.0);
    let structure = structure_report(&values, DEFAULT_RANK_TOLERANCE)?;
    let path = match &args.output {
        Some(p) => p.clone(),
        None => {
            let dir = cli.output_dir.clone().unwrap_or_else(|| PathBuf::from("."));
            ensure_dir(&dir)?;
            dir.join(format!("maze_r{}_s{}.map", spec.target_rank, spec.seed))
        }
    };
    write_file(&path, &save_map(&report.map))?;
    println!(
        "wrote {}: measured rank {} coherence {:.4} featured {:.4} attempts {}",
        path.display(),
        structure.numeric_rank,
        structure.coherence,
        report.map.count(CellState::Featured) as f64 / report.map.len() as f64,
        report.attempts
    );
    Ok(())
}

fn cmd_analyze(map_path: &Path) -> Result<()> {
    let map = load_map(&read_file(map_path)?)?;
    let values = encode(&map, &EncodingScheme::default()).filled(0.0);
    let report = structure_report(&values, DEFAULT_RANK_TOLERANCE)?;
    println!("map {}", map_path.display());
    println!("size {}x{}", map.rows(), map.cols());
    println!("known {:.4}", map.known_fraction());
    println!("featured {:.4}", map.count(CellState::Featured) as f64 / map.len() as f64);
    println!("rank {}", report.numeric_rank);
    println!("coherence {:.6}", report.coherence);
    let top: Vec<String> = report
        .singular_values
        .iter()
        .take(report.numeric_rank.clamp(1, 12))
        .map(|s| format!("{s:.4}"))
        .collect();
    println!("singular_values {}", top.join(" "));
    Ok(())
}

fn solver_from(args: &CompleteArgs) -> SolverConfig {
    let mut config = SolverConfig::default();
    if let Some(l) = args.lambda {
        config.lambda = Lambda::Absolute(l);
    }
    if let Some(f) = args.lambda_fraction {
        config.lambda = Lambda::SpectralFraction(f);
    }
    if let Some(t) = args.tol {
        config.tolerance = t;
    }
    if let Some(m) = args.max_iter {
        config.max_iterations = m;
    }
    config
}

fn cmd_complete(cli: &Cli, args: &CompleteArgs) -> Result<()> {
    let config = solver_from(args);
    if cli.print_config {
        match config.lambda {
            Lambda::Absolute(l) => println!("solver.lambda = {l}"),
            Lambda::SpectralFraction(f) => println!("solver.lambda_fraction = {f}"),
        }
        println!("solver.tolerance = {}", config.tolerance);
        println!("solver.max_iterations = {}", config.max_iterations);
        if let Some(f) = args.observe {
            println!("observe = {f}");
        }
        return Ok(());
    }
    config.validate()?;
    let scheme = EncodingScheme::default();
    let map = load_map(&read_file(&args.map)?)?;
    let (partial, truth): (_, Option<&FeatureMap>) = match args.observe {
        None if map.is_fully_known() => {
            return Err(Error::invalid(
                "map has no unknown cells; pass --observe <fraction> to sample it",
            ))
        }
        None => (encode(&map, &scheme), None),
        Some(f) => {
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::invalid(format!("--observe must lie in (0, 1], got {f}")));
            }
            let target = ((f * map.len() as f64).round() as usize).max(1);
            let sensor = SensorConfig {
                rng_seed: cli.seed.unwrap_or(0),
                ..SensorConfig::default()
            };
            let partial = sample_static(&map, SamplingPattern::UniformRandom, target, 1, &sensor, &scheme)?;
            (partial, Some(&map))
        }
    };
    let result = complete(&partial, &config)?;
    let predicted = classify(&result.completed, &scheme, map.resolution())?;
    let path = match &args.output {
        Some(p) => p.clone(),
        None => {
            let stem = args.map.file_stem().and_then(|s| s.to_str()).unwrap_or("map");
            let dir = cli.output_dir.clone().unwrap_or_else(|| PathBuf::from("."));
            ensure_dir(&dir)?;
            dir.join(format!("{stem}_completed.map"))
        }
    };
    write_file(&path, &save_map(&predicted))?;
    println!("wrote {}", path.display());
    println!("observed {:.4}", partial.observed_fraction());
    println!(
        "iterations {} converged {} lambda {:.6} rank {} objective {:.6}",
        result.iterations, result.converged, result.lambda, result.numeric_rank, result.objective
    );
    if let Some(truth) = truth {
        println!("tpa {:.4}", tpa(&predicted, truth)?);
        match ppa(&predicted, truth, partial.omega()) {
            Ok(v) => println!("ppa {v:.4}"),
            Err(Error::UndefinedMetric(_)) => println!("ppa -"),
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

fn outputs(spec: &ExperimentSpec, cli: &Cli) -> Result<Outputs> {
    ensure_dir(&spec.output_dir)?;
    Ok(Outputs {
        dir: spec.output_dir.clone(),
        timing: !cli.no_timing,
    })
}

fn cmd_sweep(cli: &Cli, path: &Path) -> Result<()> {
    let spec = load_spec(path, cli)?;
    if cli.print_config {
        print!("{}", spec.to_text());
        return Ok(());
    }
    spec.validate_sweep()?;
    let out = outputs(&spec, cli)?;
    let agg = sweep::write_sweep(&spec, &out)?;
    let (runs, aggregate) = sweep::sweep_paths(&spec, &out.dir);
    println!("wrote {} and {}", runs.display(), aggregate.display());
    for a in agg.iter().filter(|a| a.metric != "revealed") {
        println!(
            "C {:<5} {:<8} {:<4} mean {:.4} std {:.4} n {}",
            a.c,
            a.pattern.name(),
            a.metric,
            a.mean,
            a.std_dev,
            a.n
        );
    }
    Ok(())
}

fn cmd_coverage(cli: &Cli, path: &Path, all_quantiles: bool) -> Result<()> {
    let spec = load_spec(path, cli)?;
    if cli.print_config {
        print!("{}", spec.to_text());
        return Ok(());
    }
    spec.validate_coverage()?;
    let out = outputs(&spec, cli)?;
    let quantiles: &[u32] = if all_quantiles { &ALL_QUANTILES } else { &DEFAULT_QUANTILES };
    let summary = coverage::write_coverage(&spec, &out, quantiles)?;
    println!("wrote {}", coverage::summary_path(&spec, &out.dir).display());
    println!("{}", SUMMARY_HEADER.join("\t"));
    for row in &summary {
        println!("{}", coverage::summary_fields(row).join("\t"));
    }
    Ok(())
}

/// Parse `args` (including the program name) and run the command.
pub fn run_cli<I, T>(args: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::invalid(e.to_string()))?;
    dispatch(&cli)
}

fn dispatch(cli: &Cli) -> Result<()> {
    configure_threads()?;
    match &cli.command {
        Command::Generate(args) => cmd_generate(cli, args),
        Command::Analyze { map } => cmd_analyze(map),
        Command::Complete(args) => cmd_complete(cli, args),
        Command::Sweep { spec } => cmd_sweep(cli, spec),
        Command::Coverage { spec, all_quantiles } => cmd_coverage(cli, spec, *all_quantiles),
    }
}

/// Binary entry point.
pub fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lrmc: error: {e}");
            ExitCode::FAILURE
        }
    }
}
