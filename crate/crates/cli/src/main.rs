use std::fmt;
use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod config;
mod output;
mod process;

use args::{Cli, Command};

/// Bad flag or configuration values (exit code 2).
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Some acceptance criteria failed (exit code 4).
#[derive(Debug)]
pub struct ValidationFailed(pub usize);

impl fmt::Display for ValidationFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} criteria failed", self.0)
    }
}

impl std::error::Error for ValidationFailed {}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    if e.downcast_ref::<ValidationFailed>().is_some() {
        return 4;
    }
    match e.downcast_ref::<fracgm::Error>() {
        Some(
            fracgm::Error::Domain(_)
            | fracgm::Error::Parameter(_)
            | fracgm::Error::Unsupported(_)
            | fracgm::Error::Index { .. },
        ) => 2,
        Some(_) => 3,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let file = match &cli.config {
        Some(path) => config::FileConfig::load(path)?,
        None => config::FileConfig::default(),
    };
    if let Some(n) = cli.threads.or(file.threads) {
        if n == 0 {
            return Err(UsageError("threads must be >= 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let ctx = commands::Context::new(&cli, file)?;
    match &cli.command {
        Command::VarCurve(a) => commands::var_curve(&ctx, a),
        Command::CovTable(a) => commands::cov_table(&ctx, a),
        Command::Simulate(a) => commands::simulate(&ctx, a),
        Command::Validate(a) => commands::validate(&ctx, a),
        Command::Neuro(a) => commands::neuro(&ctx, a),
    }
}
