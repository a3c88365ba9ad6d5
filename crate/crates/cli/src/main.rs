use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use metaconverse_cli::{
    cmd_bsc_fig2, cmd_check, cmd_example_fig1, cmd_lossy_demo, cmd_solve, CliError, Outcome, QyChoice,
    EXIT_CHECK_FAILED,
};

/// Exact M-ary hypothesis testing error and converse bounds.
#[derive(Debug, Parser)]
#[command(name = "metaconverse", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bound curves of the built-in ternary example as CSV.
    Fig1 {
        /// Uniform γ points on [0, 1] added to the exact jump points.
        #[arg(long, default_value_t = 100)]
        gamma_grid: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Best-code error and meta-converse bounds for a BSC as CSV.
    BscFig2 {
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(short = 'M', long = "codewords", default_value_t = 4)]
        m: usize,
        /// Search threads; defaults to the available parallelism.
        #[arg(long)]
        workers: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve an instance file and report every bound as JSON.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "pstar")]
        qy: QyChoice,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Excess distortion and its converse bounds for a lossy instance file.
    LossyDemo {
        instance: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the tightness identities on seeded random instances.
    Check {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        instances: usize,
    },
}

fn emit(outcome: &Outcome, output: Option<&PathBuf>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, &outcome.text).map_err(|source| CliError::Io { path: path.clone(), source }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(outcome.text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source })
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let (outcome, output) = match cli.command {
        Command::Fig1 { gamma_grid, output } => (cmd_example_fig1(gamma_grid)?, output),
        Command::BscFig2 { n_max, delta, m, workers, output } => {
            let workers = workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            (cmd_bsc_fig2(n_max, delta, m, workers)?, output)
        }
        Command::Solve { instance, qy, output } => (cmd_solve(&instance, qy)?, output),
        Command::LossyDemo { instance, output } => (cmd_lossy_demo(&instance)?, output),
        Command::Check { seed, instances } => (cmd_check(seed, instances)?, None),
    };
    emit(&outcome, output.as_ref())?;
    Ok(outcome)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(outcome) if outcome.passed() => ExitCode::SUCCESS,
        Ok(outcome) => {
            for failure in &outcome.failures {
                eprintln!("check failed: {failure}");
            }
            ExitCode::from(EXIT_CHECK_FAILED as u8)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
