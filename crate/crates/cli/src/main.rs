//! `ncg`: tables, checks and scans for indefinite spectral triples.
//!
//! Exit codes: 0 success, 1 invalid input, 2 a numerical check failed.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ncg_core::testkit::DEFAULT_SEED;

use output::Format;

#[derive(Debug, Parser)]
#[command(name = "ncg", version, about = "Indefinite spectral triple workbench")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: Format,

    /// Seed for sampled checks; the NCG_SEED environment variable takes precedence.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignTable {
    A,
    KoMetric,
    Spacetime,
    Cardinal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Cutoff {
    Gaussian,
    Exp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Path {
    Auto,
    Grid,
    Fourier,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sign and dimension tables.
    Signs {
        #[arg(long, value_enum)]
        table: SignTable,
        /// Signature for the cardinal table.
        #[arg(long, default_value_t = 1)]
        q: u32,
        #[arg(long, default_value_t = 3)]
        p: u32,
    },
    /// Build the spinor module of Cl(q,p) and check its signs.
    Clifford {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        p: usize,
        /// Print every matrix of the module.
        #[arg(long)]
        dump: bool,
    },
    /// Tensor two Clifford modules and their triples.
    Tensor {
        #[arg(long, value_parser = commands::parse_signature)]
        left: (usize, usize),
        #[arg(long, value_parser = commands::parse_signature)]
        right: (usize, usize),
        #[arg(long, value_enum, default_value = "west")]
        left_convention: commands::ConventionArg,
        #[arg(long, value_enum, default_value = "west")]
        right_convention: commands::ConventionArg,
    },
    /// Check the axioms of a triple read from JSON.
    IstCheck {
        #[arg(long)]
        model: PathBuf,
    },
    /// Finite Standard Model triple from a JSON model file.
    Sm(SmArgs),
    /// Spectral action on a discrete torus, optionally scanned over the spacing.
    SpectralAction(SpectralArgs),
    /// Run the acceptance suite.
    VerifyAll {
        #[arg(long, default_value_t = 8)]
        max_dim: usize,
        /// Comma-separated criterion ids (default: all).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Debug, Args)]
pub struct SmArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Bosonic Lagrangian coefficients a..e.
    #[arg(long, group = "view")]
    pub coeffs: bool,
    /// Gauge couplings and Higgs vacuum values.
    #[arg(long, group = "view")]
    pub couplings: bool,
    /// Closed-form Higgs projection against the generic form pipeline.
    #[arg(long, group = "view")]
    pub higgs_projection: bool,
    /// Compare the coefficients with the trace oracle as well.
    #[arg(long, requires = "coeffs")]
    pub oracle: bool,
    /// Higgs quaternion as re(alpha),im(alpha),re(beta),im(beta).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = [1.0, 0.0, 0.0, 0.0])]
    pub qh: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct SpectralArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub t: usize,
    #[arg(long)]
    pub s: usize,
    /// Points per circle (required without --scan-a).
    #[arg(long = "N")]
    pub n: Option<usize>,
    /// Circumference of each circle.
    #[arg(long = "L", default_value_t = 1.0)]
    pub length: f64,
    #[arg(long)]
    pub lambda: f64,
    /// Log-spaced spacings `lo:hi:count`; N = round(L/a) for each.
    #[arg(long)]
    pub scan_a: Option<String>,
    #[arg(long, value_enum, default_value = "gaussian")]
    pub cutoff: Cutoff,
    #[arg(long, value_enum, default_value = "auto")]
    pub path: Path,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let seed = match std::env::var("NCG_SEED") {
        Ok(v) => match v.trim().parse() {
            Ok(s) => s,
            Err(_) => {
                eprintln!("error: NCG_SEED must be an unsigned integer (got {v:?})");
                return ExitCode::from(1);
            }
        },
        Err(_) => cli.seed,
    };
    let result = match cli.command {
        Command::Signs { table, q, p } => commands::signs(table, q, p),
        Command::Clifford { q, p, dump } => commands::clifford(q, p, dump),
        Command::Tensor { left, right, left_convention, right_convention } => {
            commands::tensor(left, right, left_convention, right_convention)
        }
        Command::IstCheck { model } => commands::ist_check(&model),
        Command::Sm(args) => commands::sm(&args),
        Command::SpectralAction(args) => commands::spectral_action(&args),
        Command::VerifyAll { max_dim, only } => commands::verify_all(seed, max_dim, &only),
    };
    match result {
        Ok(report) => {
            print!("{}", output::render(&report, cli.format));
            if report.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("check failed");
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
