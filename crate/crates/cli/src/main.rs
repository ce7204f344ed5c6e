use clap::{Parser, Subcommand};
use multidep_cli::commands::{
    run_diag, run_estimate, run_graph, run_mfoci, run_simulate, CommandResult, DiagArgs,
    EstimateArgs, GraphArgs, MfociArgs, SimulateArgs,
};
use multidep_cli::CliError;
use std::io::Write;
use std::process::ExitCode;

/// Multi-response dependence estimation, feature selection and simulation.
#[derive(Parser)]
#[command(name = "multidep", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate a dependence statistic from a CSV file
    Estimate(EstimateArgs),
    /// Forward feature selection with the first-non-increase stopping rule
    Mfoci(MfociArgs),
    /// Generate model data or run Monte Carlo / selection studies
    Simulate(SimulateArgs),
    /// Directed dependence network over column groups (JSON + DOT)
    Graph(GraphArgs),
    /// Bootstrap variance or normality diagnostics
    Diag(DiagArgs),
}

fn configure_threads() -> Result<(), CliError> {
    match std::env::var("MULTIDEP_THREADS") {
        Ok(raw) => {
            let threads: usize = raw
                .parse()
                .ok()
                .filter(|&t| t >= 1)
                .ok_or_else(|| {
                    CliError::config(format!(
                        "MULTIDEP_THREADS=`{raw}` is not a positive integer"
                    ))
                })?;
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global()
                .map_err(|e| CliError::config(format!("cannot build thread pool: {e}")))
        }
        Err(_) => Ok(()),
    }
}

fn emit(result: CommandResult) -> Result<(), CliError> {
    if let Some((path, content)) = result.file {
        std::fs::write(&path, content).map_err(|e| {
            CliError::config(format!("cannot write `{}`: {e}", path.display()))
        })?;
    }
    if !result.stdout.is_empty() {
        let mut out = std::io::stdout().lock();
        out.write_all(result.stdout.as_bytes())
            .and_then(|_| out.flush())
            .map_err(|e| CliError::compute_msg(format!("cannot write stdout: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || -> Result<(), CliError> {
        configure_threads()?;
        let result = match &cli.command {
            Command::Estimate(args) => run_estimate(args)?,
            Command::Mfoci(args) => run_mfoci(args)?,
            Command::Simulate(args) => run_simulate(args)?,
            Command::Graph(args) => run_graph(args)?,
            Command::Diag(args) => run_diag(args)?,
        };
        emit(result)
    };
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code)
        }
    }
}
