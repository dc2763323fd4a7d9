//! Command-line front end: analysis, diagrams, normal-form reports,
//! simulation and sweeps, driven by JSON configs with flag overrides.

mod commands;
mod config;

use clap::{Parser, Subcommand};
use commands::Ctx;
use config::Config;
use std::path::PathBuf;
use tanner_core::Error;

#[derive(Debug)]
pub enum CliError {
    /// Bad configuration or arguments (exit code 2).
    Validation(String),
    /// Numerical failure inside the toolkit (exit code 3).
    Numerical(String),
    /// Strict-mode prediction/observation mismatch (exit code 4).
    Disagreement,
}

pub type CliResult<T> = Result<T, CliError>;

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::Io(_) => CliError::Validation(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "tanner",
    about = "Bifurcation analysis and pattern simulation for a diffusive ratio-dependent Holling-Tanner system",
    version
)]
struct Cli {
    /// JSON configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<String>,
    /// Output directory for generated files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Stdout format where both make sense.
    #[arg(long, global = true, default_value = "json", value_parser = ["json", "csv"])]
    format: String,
    /// Absolute tolerance of the integer-membership regime tests.
    #[arg(long, global = true, allow_hyphen_values = true)]
    integrality_tol: Option<f64>,
    /// Exit with code 4 when a sweep row disagrees with its prediction.
    #[arg(long, global = true)]
    strict: bool,

    #[arg(long, global = true, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    b: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    d1: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    d2: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    r: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    l: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    l_min: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    l_max: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    alpha1: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    alpha2: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    dt: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    t_end: Option<f64>,
    #[arg(long, global = true)]
    m: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stability verdict plus the regime report at fixed parameters.
    Analyze,
    /// Critical-curve samples and located intersections in a window.
    Diagram,
    /// The coincidence sets of domain scales.
    Codim2,
    /// Locate the organizing point and emit the reduced-flow report.
    Normalform,
    /// Planar equilibria, region and predictions at a parameter offset.
    Planar,
    /// Integrate the PDE and export the trajectory files.
    Simulate,
    /// Re-classify an exported trajectory directory.
    Classify {
        /// Directory holding snapshots.csv, probes.csv, modes.csv.
        #[arg(long)]
        run_dir: Option<String>,
    },
    /// Run a prediction-vs-simulation campaign over parameter offsets.
    Sweep,
}

fn build_ctx(cli: &Cli) -> CliResult<Ctx> {
    let mut config = match &cli.config {
        Some(path) => Config::load(path).map_err(CliError::Validation)?,
        None => Config::default(),
    };
    // Flags win over file values.
    if cli.a.is_some() {
        config.params.a = cli.a;
    }
    if cli.b.is_some() {
        config.params.b = cli.b;
    }
    if cli.d1.is_some() {
        config.params.d1 = cli.d1;
    }
    if cli.d2.is_some() {
        config.params.d2 = cli.d2;
    }
    if cli.r.is_some() {
        config.params.r = cli.r;
    }
    if cli.l.is_some() {
        config.params.l = cli.l;
    }
    if let (Some(lo), Some(hi)) = (cli.l_min, cli.l_max) {
        config.l_window = Some([lo, hi]);
    }
    if let (Some(a1), Some(a2)) = (cli.alpha1, cli.alpha2) {
        config.alpha = Some([a1, a2]);
    }
    if cli.dt.is_some() || cli.t_end.is_some() || cli.m.is_some() {
        let mut sim = config.sim.clone().unwrap_or_default();
        if let Some(dt) = cli.dt {
            sim.dt = dt;
        }
        if let Some(t_end) = cli.t_end {
            sim.t_end = t_end;
        }
        if let Some(m) = cli.m {
            sim.m = m;
        }
        config.sim = Some(sim);
    }
    if cli.integrality_tol.is_some() {
        config.integrality_tol = cli.integrality_tol;
    }
    let integrality_tol = config
        .integrality_tol
        .unwrap_or(tanner_core::critical_sets::INTEGRALITY_TOL);
    Ok(Ctx {
        config,
        out: cli.out.clone(),
        format: cli.format.clone(),
        strict: cli.strict,
        integrality_tol,
    })
}

fn run(cli: &Cli) -> CliResult<()> {
    let ctx = build_ctx(cli)?;
    match &cli.command {
        Command::Analyze => commands::cmd_analyze(&ctx),
        Command::Diagram => commands::cmd_diagram(&ctx),
        Command::Codim2 => commands::cmd_codim2(&ctx),
        Command::Normalform => commands::cmd_normalform(&ctx),
        Command::Planar => commands::cmd_planar(&ctx),
        Command::Simulate => commands::cmd_simulate(&ctx),
        Command::Classify { run_dir } => commands::cmd_classify(&ctx, run_dir.as_deref()),
        Command::Sweep => commands::cmd_sweep(&ctx),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => {}
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(3);
        }
        Err(CliError::Disagreement) => {
            eprintln!("error: sweep disagreement under --strict");
            std::process::exit(4);
        }
    }
}
