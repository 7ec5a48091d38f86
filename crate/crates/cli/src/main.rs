use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod system_file;

use commands::Failure;

/// Spectral-radius analysis of linear systems under periodic impulsive control.
#[derive(Parser)]
#[command(name = "pulsekit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// JSON system file with fields A, D, time_unit and optional name
    #[arg(long)]
    input: Option<PathBuf>,
    /// Built-in system id (see `pulsekit preset`)
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide diagonal symmetrizability; exits 2 when A is not symmetrizable
    Symmetrize {
        #[command(flatten)]
        source: Source,
    },
    /// Sample r(tau) on a uniform grid and write CSV
    Curve {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        tau_max: f64,
        #[arg(long, default_value_t = 201)]
        samples: usize,
        /// Output CSV path (standard output when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify the system and compute the stability threshold and optimal period
    Analyze {
        #[command(flatten)]
        source: Source,
    },
    /// Simulate the pulsed system and compare its growth with r(tau)
    Simulate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        periods: usize,
        /// Comma-separated initial state (all ones when omitted)
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
        /// Evenly spaced samples recorded between pulses
        #[arg(long, default_value_t = 0)]
        interior: usize,
        /// Output CSV path for the trajectory
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List built-in systems, or export one as a system file
    Preset {
        /// Preset id to export as JSON
        #[arg(long)]
        export: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> commands::CmdResult {
    let load = |s: &Source| commands::load(s.input.as_deref(), s.preset.as_deref());
    match cli.command {
        Command::Symmetrize { source } => commands::symmetrize(&load(&source)?),
        Command::Curve {
            source,
            tau_max,
            samples,
            out,
        } => commands::curve(&load(&source)?, tau_max, samples, out.as_deref()),
        Command::Analyze { source } => commands::analyze(&load(&source)?),
        Command::Simulate {
            source,
            tau,
            periods,
            x0,
            interior,
            out,
        } => commands::simulate(
            &load(&source)?,
            tau,
            periods,
            x0.as_deref(),
            interior,
            out.as_deref(),
        ),
        Command::Preset { export, out } => commands::preset(export.as_deref(), out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative) => ExitCode::from(2),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
