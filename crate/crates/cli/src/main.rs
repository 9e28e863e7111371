//! `wsrank`: stable ranks, Wasserstein and interleaving distances, synthetic
//! datasets, metric learning and presentation-matrix reduction from the
//! command line.
//!
//! Exit status is 0 on success, 2 when the input is invalid and 1 for any
//! other failure.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// Failures caused by the user's input rather than by the run itself.
#[derive(Debug)]
pub struct Validation(pub String);

impl std::fmt::Display for Validation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Validation {}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<Validation>().is_some() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<wsrank::Error>() {
            return match e {
                wsrank::Error::Io(_) | wsrank::Error::NonFinite(_) => 1,
                _ => 2,
            };
        }
        if cause.downcast_ref::<serde_json::Error>().is_some() {
            return 2;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: cannot configure {jobs} workers: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
