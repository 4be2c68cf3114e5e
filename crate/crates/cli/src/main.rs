use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qwalk_core::Tolerances;

mod commands;

#[derive(Parser)]
#[command(name = "qwalk", version, about = "Quantum-walk sampling and classical mixing experiments")]
struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Eigensolver residual tolerance.
    #[arg(long, global = true)]
    tol_eigen: Option<f64>,
    /// Absolute eigenvalue clustering tolerance.
    #[arg(long, global = true)]
    tol_class: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Single,
    Double,
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Torus,
    Hypercube,
    Complete,
    All,
}

#[derive(Subcommand)]
pub enum Command {
    /// Build a transition matrix for a graph family.
    Generate {
        #[arg(long)]
        family: String,
        /// Comma-separated `k=v` pairs, e.g. `p=5,d=2`.
        #[arg(long, default_value = "")]
        params: String,
        /// Emit the lazy walk `(I + P)/2`.
        #[arg(long)]
        lazy: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classical and quantum mixing summary.
    Analyze {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.1, 0.01])]
        eps: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write `t,d,dbar` rows for plotting.
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Last `t` in the profile (default: twice the largest exact τ(ε)).
        #[arg(long)]
        t_max: Option<u64>,
    },
    /// Finite-time Cesaro matrix.
    Cesaro {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long = "T")]
        horizon: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Infinite-time Cesaro matrix and its entry floor.
    Pi {
        #[arg(long)]
        matrix: PathBuf,
        /// Also write the snapshot.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quantum mixing time at one or more `ε`.
    Qmix {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [0.0625])]
        eps: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the single- or double-loop sampler.
    Sample {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Mode::Double)]
        mode: Mode,
        /// Initial state.
        #[arg(long, default_value_t = 0)]
        x0: usize,
        /// Per-trial, per-round CSV trace.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Numerical checks of the torus, hypercube and complete-graph results.
    Conjecture {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value = "lab_report.json")]
        out: PathBuf,
        /// Directory for evidence CSVs (default: next to `--out`).
        #[arg(long)]
        csv_dir: Option<PathBuf>,
    },
    /// Lie-product error of the edge-coloring decomposition.
    Trotter {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [4, 8, 16, 32])]
        j: Vec<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarize `analyze` and `sample` outputs in one table.
    Report {
        /// JSON files from `analyze` and `sample`.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Markdown output (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let mut tol = Tolerances::default();
    if let Some(t) = cli.tol_eigen {
        tol.eigen_residual = t;
    }
    tol.class_tol = cli.tol_class;
    match commands::run(cli.command, &tol) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
