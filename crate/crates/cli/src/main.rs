//! Command-line front end for the sunfleet simulation engine.
//!
//! Every command is deterministic given its inputs and seed flags, writes
//! its artifacts atomically, never mutates an input file, and leaves a
//! `manifest.json` with enough digests to prove a rerun reproduced the same
//! bytes. Exit codes are stable: 0 success, 1 validation failure, 2 I/O
//! failure.

mod artifacts;
mod cmd_coherence;
mod cmd_preset;
mod cmd_run;
mod cmd_scan;
mod cmd_sweep;
mod error;
mod inputs;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "sunfleet",
    version,
    about = "Simulate rooftop PV with an EV fleet as dispatchable storage",
    propagate_version = true
)]
struct Cli {
    /// Worker threads for parallel work (default: all cores).
    /// Results are identical for any value.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one scenario: indicators, hourly flows, daily profile.
    Run(cmd_run::RunArgs),
    /// Sweep roof coverage and locate the economic optimum.
    Sweep(cmd_sweep::SweepArgs),
    /// Map annual specific yield over panel tilt and azimuth.
    Scan(cmd_scan::ScanArgs),
    /// Wavelet coherence, phase, and significance for two hourly series.
    Coherence(cmd_coherence::CoherenceArgs),
    /// Inspect the bundled region presets.
    Preset(cmd_preset::PresetArgs),
}

fn dispatch(cli: &Cli) -> CliResult<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Validation(
                "--threads must be at least 1".to_string(),
            ));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Validation(format!("--threads: {e}")))?;
    }
    match &cli.command {
        Command::Run(args) => cmd_run::main(args),
        Command::Sweep(args) => cmd_sweep::main(args),
        Command::Scan(args) => cmd_scan::main(args),
        Command::Coherence(args) => cmd_coherence::main(args),
        Command::Preset(args) => cmd_preset::main(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version render to stdout and exit 0; genuine usage
            // errors are validation failures under the exit-code contract.
            let is_error = e.use_stderr();
            let _ = e.print();
            return if is_error {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
