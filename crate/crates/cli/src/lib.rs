//! Command-line front-end for `spinsep`: JSON file formats and subcommands.

pub mod args;
pub mod commands;
pub mod error;
pub mod format;

pub use args::Cli;
pub use commands::{run, Outcome};
pub use error::CliError;
