//! Experiment harness for the zerosum solver toolkit: seeded solve runs
//! with periodic evaluation checkpoints, strategy-file evaluation, the
//! exploitation/exploitability sweep, and the exact-versus-sampled
//! convergence comparison. All runs are reproducible from their seed.

mod commands;
mod output;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "zerosum", version, about = "Solvers for two-player zero-sum games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a solver and record metric checkpoints plus the final strategy.
    Solve(SolveArgs),
    /// Evaluate strategy files exactly.
    Eval(EvalArgs),
    /// Sweep the model-confidence parameter p and record the trade-off.
    Sweep(SweepArgs),
    /// Race exact restricted Nash response against the sampled variant.
    Compare(CompareArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Game: kuhn, ocp:N, goof:N, bluff:N, or pam:RxCxH.
    #[arg(long)]
    game: String,
    /// Algorithm: cfr, mccfr, mcts, rnr, or mcrnr.
    #[arg(long)]
    algo: String,
    #[arg(long)]
    iters: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Evaluate metrics every this many iterations (0 = only at the end).
    #[arg(long = "eval-every", default_value_t = 10_000)]
    eval_every: u64,
    /// Exploration floor for sampled algorithms.
    #[arg(long, default_value_t = 0.6)]
    epsilon: f64,
    /// UCT exploration coefficient, in payoff units.
    #[arg(long = "C", default_value_t = 2.0)]
    exploration: f64,
    /// Model confidence for rnr/mcrnr.
    #[arg(long, default_value_t = 0.0)]
    p: f64,
    /// Restriction mode for rnr/mcrnr: root-coin or mix.
    #[arg(long, default_value = "root-coin")]
    mode: String,
    /// Restricted player for rnr/mcrnr: 1 or 2.
    #[arg(long, default_value_t = 2)]
    restricted: u8,
    /// Strategy file holding the opponent model (required when p > 0).
    #[arg(long = "sigma-fix")]
    sigma_fix: Option<PathBuf>,
    #[arg(long = "out-csv")]
    out_csv: Option<PathBuf>,
    #[arg(long = "out-strategy")]
    out_strategy: Option<PathBuf>,
    /// Output directory for derived file names (default: ZEROSUM_OUT_DIR or ".").
    #[arg(long = "out-dir")]
    out_dir: Option<PathBuf>,
    /// Run this many consecutively-seeded runs concurrently.
    #[arg(long = "parallel-seeds", default_value_t = 1)]
    parallel_seeds: u64,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    game: String,
    /// Strategy file for player one.
    #[arg(long)]
    p1: PathBuf,
    /// Strategy file for player two.
    #[arg(long)]
    p2: PathBuf,
    /// Comma-separated metrics: exploitability, ev, sqre, dom_e.
    #[arg(long, default_value = "exploitability,ev")]
    metrics: String,
    #[arg(long = "out-csv")]
    out_csv: Option<PathBuf>,
    #[arg(long = "out-dir")]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    game: String,
    /// Strategy file holding the opponent model for both seats.
    #[arg(long = "sigma-fix")]
    sigma_fix: PathBuf,
    /// Equilibrium baseline strategy file; computed by MCCFR when absent.
    #[arg(long)]
    ne: Option<PathBuf>,
    /// Iterations for the computed baseline (defaults to --iters).
    #[arg(long = "ne-iters")]
    ne_iters: Option<u64>,
    /// MCRNR iterations per (p, restricted-player) run.
    #[arg(long)]
    iters: u64,
    /// Comma-separated confidence values (default: the standard eight).
    #[arg(long = "p-list")]
    p_list: Option<String>,
    /// Comma-separated seeds, one sweep per seed.
    #[arg(long, default_value = "1")]
    seeds: String,
    #[arg(long, default_value_t = 0.6)]
    epsilon: f64,
    #[arg(long = "out-csv")]
    out_csv: Option<PathBuf>,
    #[arg(long = "out-dir")]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    game: String,
    #[arg(long = "sigma-fix")]
    sigma_fix: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long = "rnr-iters")]
    rnr_iters: u64,
    #[arg(long = "mcrnr-iters")]
    mcrnr_iters: u64,
    #[arg(long, default_value_t = 50)]
    checkpoints: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0.6)]
    epsilon: f64,
    #[arg(long = "out-rnr")]
    out_rnr: Option<PathBuf>,
    #[arg(long = "out-mcrnr")]
    out_mcrnr: Option<PathBuf>,
    #[arg(long = "out-dir")]
    out_dir: Option<PathBuf>,
}

/// Failure classes mapped to exit codes.
pub enum CliError {
    /// Bad arguments or argument combinations (exit 2).
    Args(String),
    /// Input files or parameters failed validation (exit 3).
    Validation(String),
    /// Output could not be written or input read (exit 4).
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Args(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Args(m) | CliError::Validation(m) | CliError::Io(m) => m,
        }
    }
}

impl From<zerosum_core::Error> for CliError {
    fn from(e: zerosum_core::Error) -> CliError {
        use zerosum_core::Error;
        match e {
            Error::Io(io) => CliError::Io(io.to_string()),
            Error::InvalidParams(m) => CliError::Args(m),
            other => CliError::Validation(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits with code 2 on argument errors and 0 on --help.
            e.exit();
        }
    };
    let result = match cli.command {
        Command::Solve(args) => commands::solve(args),
        Command::Eval(args) => commands::eval(args),
        Command::Sweep(args) => commands::sweep(args),
        Command::Compare(args) => commands::compare(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
