//! `quadrex`: command-line access to every library module.
//!
//! Output is JSON by default and CSV with `--csv`. Exit status is 0 on
//! success, 1 on usage errors and 2 when the library rejects the input.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "quadrex",
    version,
    about = "Quadratic residues: symbols, class sets, densities, class numbers, character sums"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Emit CSV instead of JSON.
    #[arg(long, global = true, conflicts_with = "json")]
    pub csv: bool,
    /// Emit JSON (the default).
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for sweeps (0 uses all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Upper end of prime scans.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub prime_bound: u64,
    /// Terms of each truncated L-series.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub terms: u64,
}

impl Global {
    pub fn format(&self) -> Format {
        if self.csv {
            Format::Csv
        } else {
            Format::Json
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Legendre or Jacobi symbol (A / N).
    Symbol(commands::SymbolArgs),
    /// Square roots of Z modulo N.
    Sqrt(commands::SqrtArgs),
    /// Roots of A x^2 + B x + C modulo M.
    Solve(commands::SolveArgs),
    /// Residue classes of the primes for which D is a residue or non-residue.
    Xset(commands::XsetArgs),
    /// Density of primes with a prescribed symbol pattern on a set.
    Density(commands::DensityArgs),
    /// Class number, reduced forms and fundamental unit for a discriminant.
    Forms(commands::FormsArgs),
    /// Quadratic excess on sub-intervals of [0, P] and its identities.
    Excess(commands::ExcessArgs),
    /// Quadratic Gauss sum G(N, P).
    GaussSum(commands::GaussSumArgs),
    /// Character sum of a polynomial with distinct roots and its bounds.
    Weil(commands::WeilArgs),
    /// Residue patterns along unions of arithmetic progressions.
    Ap(commands::ApArgs),
    /// Moments and normal approximation of short character sums.
    Clt(commands::CltArgs),
    /// Square-root identification protocol.
    Zkp(commands::ZkpArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.global.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.jobs)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<quadrex::Error>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
