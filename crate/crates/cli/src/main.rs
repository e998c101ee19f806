use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use cframe::commands::{self, JobOptions, Outcome, Source, EXIT_ERROR, TOLERANCE_ENV};
use cframe_core::suite::SuiteKind;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cframe", version, about = "Continuous frames in matrix Hilbert C*-modules")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Frame bounds, classification and operator checks.
    Analyze(JobArgs),
    /// Canonical dual frame and its bounds.
    Dual(JobArgs),
    /// Decide whether `frame` and `second_frame` form a dual pair.
    VerifyPair(JobArgs),
    /// Run the randomized property suites.
    Check(CheckArgs),
}

#[derive(Args)]
struct JobArgs {
    /// JSON job configuration.
    config: Option<PathBuf>,
    /// Built-in configuration instead of a file.
    #[arg(long)]
    example: Option<String>,
    /// Quadrature panels for interval measures.
    #[arg(long)]
    grid: Option<usize>,
    /// Exact rational arithmetic.
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    cases: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl JobArgs {
    fn options(&self) -> Result<JobOptions> {
        let source = match (&self.config, &self.example) {
            (Some(path), None) => Source::Path(path.clone()),
            (None, Some(name)) => Source::Example(name.clone()),
            (Some(_), Some(_)) => bail!("give either a config path or --example, not both"),
            (None, None) => bail!("a config path or --example is required"),
        };
        Ok(JobOptions {
            source,
            grid: self.grid,
            exact: self.exact,
            tolerance_override: std::env::var(TOLERANCE_ENV).ok(),
        })
    }
}

fn emit(outcome: &Outcome, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, &outcome.text)?,
        None => std::io::stdout().write_all(outcome.text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    let (outcome, out) = match &cli.command {
        Cmd::Analyze(a) => (commands::analyze(&a.options()?)?, a.out.as_ref()),
        Cmd::Dual(a) => (commands::dual(&a.options()?)?, a.out.as_ref()),
        Cmd::VerifyPair(a) => (commands::verify_pair(&a.options()?)?, a.out.as_ref()),
        Cmd::Check(c) => {
            let suite: SuiteKind = c.suite.parse()?;
            (commands::check(suite, c.seed, c.cases)?, c.out.as_ref())
        }
    };
    emit(&outcome, out)?;
    Ok(outcome.exit)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
