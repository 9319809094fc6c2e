//! `pdz`: compress probability distributions into small containers and read them back.

mod commands;
mod error;
mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use pdz::Sparsity;

#[derive(Debug, Parser)]
#[command(name = "pdz", version, about = "Lossy compression of probability distributions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Tree,
    Refine,
    Sparse,
    SparseQueryable,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compress a weight list into a container.
    Compress {
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Refinement parameter for `refine` (default 3).
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=u16::MAX as i64))]
        k: Option<u32>,
        /// Sparsity `c >= 1` for the sparse methods, as NUM/DEN or an integer (default 1).
        #[arg(long)]
        c: Option<Sparsity>,
        /// Smooth with this epsilon before building a tree; allows zero weights.
        #[arg(long, value_parser = parse_epsilon)]
        epsilon: Option<BigRational>,
        input: PathBuf,
        output: PathBuf,
    },
    /// Write the stored distribution, one probability per line.
    Decompress {
        /// Significant digits for sparse values.
        #[arg(long, default_value_t = 17, value_parser = clap::value_parser!(u32).range(1..=40))]
        digits: u32,
        input: PathBuf,
        output: PathBuf,
    },
    /// Print a single probability (1-based index) without expanding the distribution.
    Query {
        #[arg(long)]
        index: u64,
        #[arg(long, default_value_t = 17, value_parser = clap::value_parser!(u32).range(1..=40))]
        digits: u32,
        input: PathBuf,
    },
    /// Compare an original weight list with a container.
    Stats {
        #[arg(long)]
        original: PathBuf,
        #[arg(long)]
        compressed: PathBuf,
        /// The epsilon used at compression time, to report the smoothed bounds.
        #[arg(long, value_parser = parse_epsilon)]
        epsilon: Option<BigRational>,
    },
    /// Describe a container.
    Info { input: PathBuf },
}

fn parse_epsilon(s: &str) -> Result<BigRational, String> {
    match format::parse_rational(s) {
        Some(x) if x > BigRational::from_integer(0.into()) => Ok(x),
        _ => Err(format!("expected a positive rational, got `{s}`")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.command {
        Command::Compress {
            method,
            k,
            c,
            epsilon,
            input,
            output,
        } => commands::compress(method, k, c, epsilon, &input, &output),
        Command::Decompress { digits, input, output } => commands::decompress(&input, &output, digits as usize),
        Command::Query { index, digits, input } => commands::query(&input, index, digits as usize),
        Command::Stats {
            original,
            compressed,
            epsilon,
        } => commands::stats(&original, &compressed, epsilon),
        Command::Info { input } => commands::info(&input),
    };
    match result {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("pdz: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
