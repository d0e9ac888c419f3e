//! `wavecoa` command-line front end.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wavecoa_core::io::SignalFormat;
use wavecoa_core::synth::Preset;
use wavecoa_core::Error;

mod commands;

const EXIT_CONFIG: u8 = 2;
const EXIT_DATA: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "wavecoa", version, about = "Optimized Morlet filtering and envelope analysis for fault diagnosis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Where a record comes from.
#[derive(Debug, Args)]
struct InputArgs {
    /// Signal file (CSV with one column, or WAV)
    #[arg(long)]
    input: Option<PathBuf>,
    /// File format; guessed from the extension when omitted
    #[arg(long, value_parser = parse_format)]
    format: Option<SignalFormat>,
    /// Sample rate in Hz (required for CSV)
    #[arg(long)]
    rate: Option<f64>,
    /// Zero-based WAV channel
    #[arg(long)]
    channel: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimize the filter for a fault frequency and write a report
    Diagnose {
        #[command(flatten)]
        input: InputArgs,
        /// Expected fault characteristic frequency in Hz
        #[arg(long)]
        fault_freq: Option<f64>,
        /// TOML or JSON run configuration
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fast-kurtogram band selection
    Kurtogram {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = wavecoa_core::kurtogram::DEFAULT_MAX_LEVEL)]
        max_level: usize,
        /// Also report the ENVSI of the best band at this fault frequency
        #[arg(long)]
        fault_freq: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a synthetic fault record
    Synth {
        #[arg(long)]
        preset: Preset,
        /// Override the preset's signal-to-noise ratio
        #[arg(long, allow_negative_numbers = true)]
        snr_db: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV file
        #[arg(long)]
        out: PathBuf,
        /// Ground-truth JSON; `truth.json` next to the output by default
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Print the correlated kurtosis of a record
    Ck {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        period_samples: f64,
        #[arg(long, default_value_t = 1)]
        shift_order: usize,
    },
}

fn parse_format(s: &str) -> Result<SignalFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_data_error() { EXIT_DATA } else { EXIT_CONFIG })
        }
    }
}
