//! `fk`: construct self-similar trajectories, tabulate their multiscale
//! measures and uncertainty products, and estimate the dimension of
//! arbitrary polylines.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "fk",
    version,
    about = "Self-similar trajectories and their multiscale measures"
)]
struct Cli {
    /// JSON object of default flag values, keyed by long flag name
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Refine a generator and write the polyline as JSON or SVG
    Generate(GenerateArgs),
    /// Scale table, uncertainty products and bound checks for a generator
    Analyze(AnalyzeArgs),
    /// Count a polyline over a resolution ladder and fit its dimension
    Measure(MeasureArgs),
    /// Seeded planar random walk as polyline JSON
    Brownian(BrownianArgs),
}

#[derive(Args, Debug)]
struct GeneratorArgs {
    /// Builtin generator: line, koch, peano or cesaro
    #[arg(long, short, conflicts_with = "spec")]
    generator: Option<String>,
    /// Opening angle in degrees, cesaro only
    #[arg(long, value_name = "DEG")]
    angle: Option<f64>,
    /// Generator spec JSON file
    #[arg(long, value_name = "FILE")]
    spec: Option<PathBuf>,
    /// Base length L0
    #[arg(long, default_value_t = 1.0)]
    l0: f64,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(flatten)]
    gen: GeneratorArgs,
    /// Refinement level k
    #[arg(long, short, default_value_t = 3)]
    level: u32,
    /// Output file; `.svg` renders, anything else is JSON. Stdout if absent
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Output format; inferred from --out when absent
    #[arg(long, value_enum)]
    format: Option<ShapeFormat>,
    /// SVG: one panel per level 0..=k, each over the grid at dx_k
    #[arg(long)]
    panels: bool,
    /// SVG: overlay the camera grid dx_K = L0 / rho^K
    #[arg(long, value_name = "K", conflicts_with = "panels")]
    grid: Option<u32>,
    /// SVG width per panel, pixels
    #[arg(long, default_value_t = 800)]
    width: u32,
    /// SVG height, pixels
    #[arg(long, default_value_t = 400)]
    height: u32,
    /// Refuse to build more vertices than this
    #[arg(long, default_value_t = fk_core::geometry::DEFAULT_MAX_VERTICES)]
    max_vertices: usize,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    gen: GeneratorArgs,
    /// Largest scale index
    #[arg(long, default_value_t = 10)]
    k_max: u32,
    /// Mass m
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    /// Time step dt
    #[arg(long, default_value_t = 1.0)]
    dt: f64,
    #[arg(long, value_enum, default_value_t = TableFormat::Json)]
    format: TableFormat,
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Also write STEM.json and STEM.scales.csv
    #[arg(long, value_name = "STEM")]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MeasureArgs {
    /// Polyline JSON file
    #[arg(long, short)]
    input: PathBuf,
    /// Inclusive scale range `k0..k1`
    #[arg(long, default_value = "1..6")]
    scales: String,
    /// Ladder ratio: dx_k = dx0 / rho^k
    #[arg(long, default_value_t = 3.0)]
    rho: f64,
    /// Coarsest resolution; defaults to the larger side of the bounding box
    #[arg(long)]
    dx0: Option<f64>,
    #[arg(long, value_enum, default_value_t = MethodArg::Grid)]
    method: MethodArg,
    /// Fit the dimension by log-log regression
    #[arg(long)]
    fit: bool,
    /// Keep saturated scales in the fit
    #[arg(long, requires = "fit")]
    keep_saturated: bool,
    #[arg(long, value_enum, default_value_t = TableFormat::Json)]
    format: TableFormat,
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Also write STEM.json and STEM.measurement.csv
    #[arg(long, value_name = "STEM")]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BrownianArgs {
    /// Number of vertices, at least 2
    #[arg(long, short)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-axis standard deviation of each increment
    #[arg(long, default_value_t = 1.0)]
    step_std: f64,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum ShapeFormat {
    Json,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum TableFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum MethodArg {
    Grid,
    Divider,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage(msg.into())
    }
}

impl From<fk_core::Error> for Failure {
    fn from(e: fk_core::Error) -> Self {
        use fk_core::Error::*;
        match e {
            InvalidParameter { .. } | InvalidGenerator(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

fn threads_from_env() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("FK_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| {
        Failure::usage(format!(
            "FK_THREADS must be a non-negative integer, got `{raw}`"
        ))
    })?;
    fk_core::configure_threads(n).map_err(|e| Failure::Runtime(e.into()))
}

fn run() -> Result<(), Failure> {
    let args = config::expand(std::env::args_os().collect())?;
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    threads_from_env()?;
    match cli.command {
        Command::Generate(a) => commands::generate(a),
        Command::Analyze(a) => commands::analyze(a),
        Command::Measure(a) => commands::measure(a),
        Command::Brownian(a) => commands::brownian(a),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nFor more information, try '--help'.");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
