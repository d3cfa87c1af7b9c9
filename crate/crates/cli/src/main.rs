//! `thinbasis`: command-line access to the explicit additive basis.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or capacity error.

mod commands;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thinbasis::primes::Rate;
use thinbasis::GrowthSpec;

use crate::commands::{CliError, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Regime {
    Linear,
    Exp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Brute,
    Both,
}

#[derive(Debug, Parser)]
#[command(name = "thinbasis", version, about = "An explicit thin additive basis of order 2")]
struct Cli {
    /// Growth function for the prime sequence: f(k) = k, or f(k) = ceil(exp(c*k)).
    #[arg(long, global = true, value_enum, default_value = "linear")]
    regime: Regime,

    /// Rate c of the exponential regime, e.g. "1/2" or "0.5" (default 1/2).
    #[arg(long, global = true)]
    c: Option<String>,

    /// Initial digit capacity of the context; grown automatically as inputs require.
    #[arg(long, global = true, value_name = "DIGITS")]
    cap: Option<usize>,

    /// Write the command's output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print whether n belongs to A.
    Member { n: String },
    /// Print a pair "a a'" with a + a' = n and a, a' in A.
    Represent { n: String },
    /// Count representations of n and print the analytic bound.
    Sigma {
        n: String,
        #[arg(long, value_enum, default_value = "exact")]
        method: Method,
        /// Largest n for the brute-force counter.
        #[arg(long, default_value_t = thinbasis::sigma::DEFAULT_BRUTE_CAP)]
        brute_cap: u64,
    },
    /// Print the mixed-radix digits of n, most significant first.
    Digits { n: String },
    /// List the members of A in [0, N].
    Enumerate { limit: u64 },
    /// Exhaustively check the modular sets A_p for all valid primes p <= PMAX.
    VerifyModular {
        pmax: u64,
        /// Largest p allowed for exhaustive checking.
        #[arg(long, default_value_t = thinbasis::modular_basis::DEFAULT_VERIFY_CAP)]
        verify_cap: u64,
    },
    /// Check coverage, representations and the bound for every n <= NMAX.
    VerifyBasis {
        nmax: u64,
        /// Compare against the brute-force counter for n up to this value.
        #[arg(long, default_value_t = 10_000)]
        oracle_limit: u64,
    },
    /// Write a CSV of windowed maxima of sigma against the bound.
    Growth { nmax: u64, step: u64 },
}

fn growth_spec(cli: &Cli) -> Result<GrowthSpec, CliError> {
    match (cli.regime, &cli.c) {
        (Regime::Linear, None) => Ok(GrowthSpec::Linear),
        (Regime::Linear, Some(_)) => Err(CliError::Usage("--c requires --regime exp".to_string())),
        (Regime::Exp, None) => Ok(GrowthSpec::exponential_default()),
        (Regime::Exp, Some(c)) => Ok(GrowthSpec::Exponential(c.parse::<Rate>()?)),
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let growth = growth_spec(cli)?;
    let outcome = commands::execute(&cli.command, growth, cli.cap.unwrap_or(1))?;
    match &cli.out {
        Some(path) => fs::write(path, &outcome.output)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(outcome.output.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Usage(format!("cannot write output: {e}")))?;
        }
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) if outcome.verified => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(err) => {
            eprintln!("thinbasis: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
