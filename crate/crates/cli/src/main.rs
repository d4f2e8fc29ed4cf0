mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use linsync_core::synccore::{DynamicsKind, DynamicsParams};

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "linsync", version, about = "Distance from synchronization of noisy linear networks")]
struct Cli {
    /// Worker threads for ensemble commands (default: logical cores).
    #[arg(long, global = true, env = "LINSYNC_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a rewired ring network and write its connectivity matrix.
    Generate(GenerateArgs),
    /// Spectral summary, σ² and optional motif ledger for a matrix file.
    Analyze(AnalyzeArgs),
    /// Small-world sweep over (p, c) cells.
    Sweep(SweepArgs),
    /// Sampling-error study: analytic vs simulated σ² over L samples.
    Converge(ConvergeArgs),
    /// Exact stochastic simulation; writes the time series as CSV.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Kind {
    Continuous,
    Discrete,
}

impl From<Kind> for DynamicsKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Continuous => DynamicsKind::Continuous,
            Kind::Discrete => DynamicsKind::Discrete,
        }
    }
}

#[derive(Debug, Clone, clap::Args)]
pub struct DynamicsArgs {
    /// Dynamics regime.
    #[arg(long = "dynamics")]
    pub kind: Option<Kind>,
    /// Reversion rate (continuous only).
    #[arg(long)]
    pub theta: Option<f64>,
    /// Noise amplitude.
    #[arg(long)]
    pub zeta: Option<f64>,
}

impl DynamicsArgs {
    pub fn params(&self) -> DynamicsParams {
        let mut p = DynamicsParams::default();
        if let Some(k) = self.kind {
            p.kind = k.into();
        }
        if let Some(t) = self.theta {
            p.theta = t;
        }
        if let Some(z) = self.zeta {
            p.zeta = z;
        }
        p
    }
}

#[derive(Debug, clap::Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub n: usize,
    /// Neighbours per node; even.
    #[arg(long)]
    pub d: usize,
    /// Coupling: every column of C sums to c.
    #[arg(long)]
    pub c: f64,
    /// Rewiring probability.
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct AnalyzeArgs {
    /// Matrix file as written by `generate`.
    pub matrix: PathBuf,
    #[command(flatten)]
    pub dynamics: DynamicsArgs,
    /// series, fixed_point, doubling, symmetric_closed_form or motif_expansion.
    #[arg(long, default_value = "fixed_point")]
    pub method: String,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_terms: usize,
    /// Write the motif ledger (order, closed, open, net, cumulative) here.
    #[arg(long)]
    pub motifs: Option<PathBuf>,
    /// Tolerance on column sums for the zero-mode check.
    #[arg(long, default_value_t = linsync_core::netgen::DEFAULT_ZERO_MODE_TOL)]
    pub zero_mode_tol: f64,
}

#[derive(Debug, clap::Args)]
pub struct SweepArgs {
    /// JSON file with SweepSpec fields; flags override it.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub c: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    #[arg(long)]
    pub realizations: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub dynamics: DynamicsArgs,
    #[arg(long, value_delimiter = ',')]
    pub low_orders: Option<Vec<usize>>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_terms: Option<usize>,
    #[arg(long)]
    pub method: Option<String>,
    /// Row CSV; stdout when neither this nor `output_path` is set.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-cell summary CSV (default: `<out>_summary.csv` next to the rows).
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct ConvergeArgs {
    /// JSON file with ConvergeSpec fields; flags override it.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    /// Sample counts L.
    #[arg(long, value_delimiter = ',')]
    pub l: Option<Vec<usize>>,
    #[arg(long)]
    pub realizations: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub dynamics: DynamicsArgs,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub burn_in: Option<usize>,
    /// Summary CSV (p, L, realizations, mean_rel_error, log_sd); stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-realization CSV.
    #[arg(long)]
    pub rows: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct SimulateArgs {
    pub matrix: PathBuf,
    #[command(flatten)]
    pub dynamics: DynamicsArgs,
    #[arg(long)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sampling interval (continuous only).
    #[arg(long, default_value_t = 1.0)]
    pub dt: f64,
    /// Discarded initial samples (default: ten relaxation times).
    #[arg(long)]
    pub burn_in: Option<usize>,
    /// Simulate stationary networks even when ρ(CU) ≥ 1.
    #[arg(long)]
    pub allow_outside_validity: bool,
    /// CSV destination; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn init_threads(threads: Option<usize>) -> CliResult<()> {
    let Some(n) = threads else { return Ok(()) };
    if n == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Generate(_) => "generate",
        Command::Analyze(_) => "analyze",
        Command::Sweep(_) => "sweep",
        Command::Converge(_) => "converge",
        Command::Simulate(_) => "simulate",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = subcommand_name(&cli.command);
    let result = init_threads(cli.threads).and_then(|()| match cli.command {
        Command::Generate(a) => commands::generate(&a),
        Command::Analyze(a) => commands::analyze(&a),
        Command::Sweep(a) => commands::sweep(&a),
        Command::Converge(a) => commands::converge(&a),
        Command::Simulate(a) => commands::simulate(&a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                let mut cmd = Cli::command();
                if let Some(sub) = cmd.find_subcommand_mut(name) {
                    eprintln!("\n{}", sub.render_usage());
                    eprintln!("For more information, try 'linsync {name} --help'.");
                }
            }
            e.exit_code()
        }
    }
}
