//! Command-line front end: `build-space`, `score`, `evaluate`, `tune` and
//! `switch-pairs`.
//!
//! Exit codes are 0 on success, 1 on a runtime failure and 2 on a usage
//! error.

mod args;
mod build;
mod config;
mod manifest;
mod pairs;

use std::ffi::OsString;

use clap::Parser;

pub use args::{BuildArgs, Cli, Command, DatasetArgs, EvaluateArgs, ScoreArgs, SwitchArgs, TuneArgs};
pub use config::FileConfig;
pub use manifest::Manifest;

/// A problem with the invocation rather than with the data.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Parse `args` (program name first), run the subcommand and return the
/// process exit code. Errors are reported on stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                EXIT_USAGE
            } else {
                EXIT_FAILURE
            }
        }
    }
}

pub fn execute(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::BuildSpace(a) => build::build_space(a),
        Command::Score(a) => pairs::score(a),
        Command::Evaluate(a) => pairs::evaluate(a),
        Command::Tune(a) => pairs::tune(a),
        Command::SwitchPairs(a) => pairs::switch_pairs(a),
    }
}

pub(crate) fn thread_pool(jobs: Option<usize>) -> anyhow::Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs.filter(|&j| j > 0) {
        b = b.num_threads(j);
    }
    Ok(b.build()?)
}
