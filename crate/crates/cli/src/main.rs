//! `banach-cover`: projections, covering estimates, fixed-point solves and
//! the verification suites from the command line.
//!
//! Exit codes: 0 all checks pass, 1 a verification failed, 2 bad input.
//! Reports go to stdout or `--out`; human-readable summaries go to stderr.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Failure;

pub const SEED_ENV: &str = "BANACH_COVER_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "banach-cover",
    version,
    about = "Metric projections, coderivatives and covering constants in l_p and L_p"
)]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand.
#[derive(Debug, Args)]
pub struct RunArgs {
    /// RNG seed; BANACH_COVER_SEED takes precedence when set.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Tolerance override `name=value`; names: covering, picard.
    #[arg(long = "tol", global = true, value_parser = parse_override)]
    pub tolerances: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Project a point onto a ball, cylinder or the positive cone.
    Project(commands::ProjectArgs),
    /// Estimate a covering constant and compare it with the known value.
    Covering(commands::CoveringArgs),
    /// Solve a built-in stochastic fixed-point example over an s grid.
    Fixpoint(commands::FixpointArgs),
    /// Run the invariant suites.
    Verify(commands::VerifyArgs),
}

fn parse_override(raw: &str) -> Result<(String, f64), String> {
    let (name, value) = raw.split_once('=').ok_or("expected name=value")?;
    let value: f64 = value.trim().parse().map_err(|_| format!("{value:?} is not a number"))?;
    if !(value.is_finite() && value > 0.0) {
        return Err(format!("tolerance must be positive, got {value}"));
    }
    Ok((name.trim().to_string(), value))
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let config = output::RunConfig::resolve(cli.run)?;
    match cli.command {
        Command::Project(args) => commands::project(&config, args),
        Command::Covering(args) => commands::covering(&config, args),
        Command::Fixpoint(args) => commands::fixpoint(&config, args),
        Command::Verify(args) => commands::verify(&config, args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
