//! File formats, JSON reports and the command-line front end for
//! `tetradigit-core`.

pub mod args;
pub mod commands;
pub mod error;
pub mod format;

pub use args::{Cli, Command};
pub use commands::Output;
pub use error::CliError;

/// Runs one parsed command line.
pub fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Model(c) => commands::cmd_model(c),
        Command::Synth(c) => commands::cmd_synth(c),
        Command::Verify(c) => commands::cmd_verify(c),
        Command::Css(c) => commands::cmd_css(c),
    }
}
