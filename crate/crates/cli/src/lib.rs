//! Library behind the `fqh` binary: argument definitions, params files,
//! message input and the subcommands.

pub mod args;
pub mod commands;
pub mod error;
pub mod message;
pub mod params_file;

pub use args::Cli;
pub use commands::run;
pub use error::{exit, CliError, CliResult};
