mod commands;
mod file;
mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact simulation of IQP circuits.
#[derive(Parser, Debug)]
#[command(name = "iqpsim", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Print one JSON document instead of plain text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Cross-check against the statevector oracle (or brute force).
    #[arg(long, global = true)]
    pub verify: bool,
    /// Largest qubit count for exhaustive engines and the oracle.
    #[arg(long, global = true, default_value_t = 20)]
    pub cap: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Report which fast paths apply.
    Classify { file: PathBuf },
    /// Probability of a full outcome string (qubit 1 leftmost).
    Prob { file: PathBuf, outcome: String },
    /// Marginal probability of `outcome` on a comma-separated qubit list.
    Marginal {
        file: PathBuf,
        qubits: String,
        outcome: String,
    },
    /// Partition function Z(s, θ) for the field bits `fields`.
    Partition { file: PathBuf, fields: String },
    /// Draw outcome strings, one per line.
    Sample {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a lattice circuit file with its embedding to stdout.
    Gen {
        lattice: Lattice,
        /// Size as `RxC`.
        size: String,
        #[arg(long, default_value = "pi/8", allow_hyphen_values = true)]
        theta: String,
    },
    /// Run the built-in checks at reduced scale.
    Selftest {
        #[arg(long, hide = true)]
        inject_fault: Option<Fault>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Lattice {
    /// Square grid.
    Grid,
    /// Square grid with one diagonal per cell.
    Tri,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Fault {
    PfaffianSign,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("iqpsim: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
