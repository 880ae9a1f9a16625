//! Command-line front end: CSV ingestion, experiment drivers, SVG figures
//! and run manifests.

pub mod args;
pub mod commands;
pub mod error;
pub mod manifest;
pub mod svg;
pub mod table;

use std::io::Write;

pub use args::Cli;
pub use error::{exit, CliError, CliResult};

/// Runs one parsed command, writing results to `out` and notes to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        args::Command::Analytic(a) => commands::analytic(a, out, err),
        args::Command::Metrics(a) => commands::metrics(a, out),
        args::Command::SimulateBall(a) => commands::simulate_ball(a, out),
        args::Command::Iris(a) => commands::iris(a, out),
    }
}
