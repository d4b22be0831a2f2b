//! `paratangent`: generate fractal node data and run the fullness, flatness,
//! interpolation, Hdeg and jet diagnostics.
//!
//! Exit codes: 0 positive verdict, 1 negative or inconclusive verdict,
//! 2 input or usage error, 3 I/O error.

mod commands;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use paratangent::analysis::{DEFAULT_FULLNESS_THRESHOLD, DEFAULT_TAIL_THRESHOLD};
use paratangent::{Mode, Rational};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Io(String),
}

impl From<paratangent::Error> for CliError {
    fn from(e: paratangent::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

/// Outcome of a successful run: 0 for a positive verdict, 1 otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Positive,
    Negative,
}

#[derive(Debug, Parser)]
#[command(
    name = "paratangent",
    version,
    about = "Vandermonde fullness and flatness diagnostics on fractal node sets"
)]
pub struct Cli {
    /// Arithmetic: exact rationals or f64.
    #[arg(long, global = true, env = "PARATANGENT_MODE", default_value = "exact")]
    pub mode: Mode,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Williams points (CSV) or a nodal sequence (JSON) for an IFS.
    Fractal(FractalArgs),
    /// Fullness check along a nodal sequence.
    Fullness(FullnessArgs),
    /// Flatness order from values along a nodal sequence.
    Flatness(FlatnessArgs),
    /// Interpolating polynomial through CSV points and values.
    Interp(CsvArgs),
    /// Homogeneous degree of a CSV point set.
    Hdeg(HdegArgs),
    /// Taylor coefficients at the first CSV point from values.
    Jet(CsvArgs),
}

#[derive(Debug, Args)]
pub struct FractalArgs {
    /// Catalog system: cantor, koch, sierpinski or menger.
    #[arg(required_unless_present = "spec", conflicts_with = "spec")]
    pub name: Option<String>,
    /// IFS spec file (JSON).
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Williams points for words of length at most DEPTH.
    #[arg(long, required_unless_present = "word", conflicts_with = "word")]
    pub depth: Option<usize>,
    /// Comma-separated 1-based word; emits the nodal sequence psi^k(base).
    #[arg(long)]
    pub word: Option<String>,
    /// Base node set: `vertices`, `auto`, or a CSV file.
    #[arg(long, default_value = "vertices", requires = "word")]
    pub base: String,
    /// Number of iterations K.
    #[arg(long, default_value_t = 5, requires = "word")]
    pub iters: usize,
    /// Polynomial degree d recorded in the sequence (and used by `--base auto`).
    #[arg(long, default_value_t = 1)]
    pub degree: u32,
    /// Output path (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write an SVG scatter plot of the points.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FullnessArgs {
    /// Nodal sequence document (JSON).
    pub sequence: PathBuf,
    /// Degree d (default: the degree recorded in the document).
    #[arg(long)]
    pub degree: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_FULLNESS_THRESHOLD)]
    pub threshold: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FlatnessArgs {
    /// Nodal sequence document (JSON).
    pub sequence: PathBuf,
    /// Flatness exponent p, 0 < p <= d.
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub degree: Option<u32>,
    /// Determinant decay exponent; estimated from the sequence when absent.
    #[arg(long)]
    pub e: Option<f64>,
    /// JSON array with one list of values per entry.
    #[arg(long, conflicts_with = "function")]
    pub values: Option<PathBuf>,
    /// Function of x1..xn (polynomials only in exact mode).
    #[arg(long)]
    pub function: Option<String>,
    #[arg(long, default_value_t = DEFAULT_TAIL_THRESHOLD)]
    pub threshold: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CsvArgs {
    /// CSV with header x1,...,xn,value.
    pub input: PathBuf,
    #[arg(long)]
    pub degree: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HdegArgs {
    /// CSV with header x1,...,xn.
    pub input: PathBuf,
    /// Largest degree searched.
    #[arg(long)]
    pub bound: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(if code == 0 { 0 } else { 2 });
        }
    };
    let result = match cli.mode {
        Mode::Exact => commands::run::<Rational>(&cli.command),
        Mode::Float => commands::run::<f64>(&cli.command),
    };
    match result {
        Ok(Verdict::Positive) => ExitCode::SUCCESS,
        Ok(Verdict::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("paratangent: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
