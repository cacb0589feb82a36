use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

use commands::CliError;

/// Environment variable holding the worker thread count for path tracking.
/// Unset or `0` means the available parallelism of the machine.
pub const THREADS_ENV: &str = "SCHUBERT_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "schubert",
    version,
    about = "Formulate, solve, and certify Schubert problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct FormArgs {
    /// full | paired | hybrid
    #[arg(long = "form", default_value = "paired")]
    form: String,
    /// 1-based hypersurface conditions for the hybrid form, e.g. `1..6` or
    /// `1,2,5`; defaults to every box condition.
    #[arg(long)]
    hypersurfaces: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the number of solutions N(β) from the Littlewood–Richardson rule.
    Count { problem: PathBuf },
    /// Write the polynomial system of a formulation and print its shape.
    Formulate {
        problem: PathBuf,
        #[command(flatten)]
        form: FormArgs,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Track, refine, certify, cluster and verify all solutions.
    Solve {
        problem: PathBuf,
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        /// Write per-path status (converged/diverged/failed) as JSON.
        #[arg(long = "paths-report")]
        paths_report: Option<PathBuf>,
        /// Relative tolerance of the membership rank tests.
        #[arg(long, default_value_t = schubert_core::verify::MEMBERSHIP_TOL)]
        tol: f64,
    },
    /// Recompute α, β, γ for the solutions of a system.
    Certify {
        system: PathBuf,
        solutions: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Check Schubert-condition membership of solved planes.
    Verify {
        problem: PathBuf,
        solutions: PathBuf,
        #[arg(long, default_value_t = schubert_core::verify::MEMBERSHIP_TOL)]
        tol: f64,
        /// Write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[cfg(feature = "parallel")]
fn configure_threads() -> Result<(), CliError> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| {
            CliError::Usage(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}"))
        })?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

#[cfg(not(feature = "parallel"))]
fn configure_threads() -> Result<(), CliError> {
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Count { problem } => commands::count(&problem),
        Command::Formulate {
            problem,
            form,
            output,
        } => commands::formulate(
            &problem,
            &form.form,
            form.hypersurfaces.as_deref(),
            output.as_deref(),
        ),
        Command::Solve {
            problem,
            form,
            seed,
            output,
            paths_report,
            tol,
        } => commands::solve(
            &problem,
            &form.form,
            form.hypersurfaces.as_deref(),
            seed,
            output.as_deref(),
            paths_report.as_deref(),
            tol,
        ),
        Command::Certify {
            system,
            solutions,
            output,
        } => commands::certify(&system, &solutions, output.as_deref()),
        Command::Verify {
            problem,
            solutions,
            tol,
            json,
        } => commands::verify(&problem, &solutions, tol, json.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
