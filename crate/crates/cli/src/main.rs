//! `ssc`: Laplacians, equitable partitions, quotients, controllability bounds
//! and duality checks for leader-follower networks.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use ssc_core::analysis::{EnumerationMode, DEFAULT_CAP, DEFAULT_SAMPLES};
use ssc_core::linalg::RankBackend;

pub const EXIT_PARSE: u8 = 2;
pub const EXIT_BAD_ARGUMENT: u8 = 3;
pub const EXIT_RESOURCE_CAP: u8 = 4;
pub const EXIT_INTERNAL: u8 = 5;

#[derive(Parser, Debug)]
#[command(name = "ssc", version, about = "Controllability analysis of matrix-weighted leader-follower networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    options: Options,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Print the Laplacian L and the leader input matrix M.
    Laplacian,
    /// Check a partition for equitability, or find the coarsest leader-protected one.
    Ep,
    /// Build the quotient graph over an equitable partition and check the lift identity.
    Quotient,
    /// Equitable-partition bound and sampled estimate of the strongly structurally controllable dimension.
    Bound,
    /// Dual pair, observability rank and the edge-reversal comparison.
    Dual,
    /// Run the consistency checks over the bundled example networks.
    Corpus,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Strict,
    Cancellative,
}

impl From<ModeArg> for EnumerationMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Strict => EnumerationMode::Strict,
            ModeArg::Cancellative => EnumerationMode::Cancellative,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendArg {
    Exact,
    Float,
}

impl From<BackendArg> for RankBackend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Exact => RankBackend::Exact,
            BackendArg::Float => RankBackend::Float,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Network document (JSON).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Partition as 1-based cells, e.g. '[[1],[2,3],[4]]' or '{{1},{2,3},{4}}'.
    #[arg(long, global = true)]
    pub partition: Option<String>,
    /// Enumeration mode; strict is only honoured when sign constraints rule out cancellation.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Cancellative)]
    pub mode: ModeArg,
    /// Weight samples per constraint system.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Rank backend; float is faster but does not certify results.
    #[arg(long, global = true, value_enum, env = "SSC_RANK_BACKEND", default_value_t = BackendArg::Exact)]
    pub backend: BackendArg,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Largest follower count whose partitions are enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_BAD_ARGUMENT),
            };
        }
    };
    match commands::run(cli.command, &cli.options) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            if !failure.output.is_empty() {
                print!("{}", failure.output);
            }
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
