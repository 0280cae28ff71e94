//! Command-line reports for scroll invariants, inequality sweeps and theta
//! probes.

pub mod config;
pub mod report;
pub mod run;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

pub use config::{Cli, Command, OutputFormat, OutputTarget, RunConfig};
pub use report::{Payload, ReportEnvelope};
pub use run::{
    execute, execute_with, run, Outcome, RunError, EXIT_FAILURE, EXIT_INCONCLUSIVE, EXIT_OK,
    EXIT_USAGE,
};

/// Parses `args`, runs the command and returns the process exit code.
/// Diagnostics go to standard error.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    let config = match RunConfig::from_cli(cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    match run(&config) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
