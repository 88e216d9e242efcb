//! Library behind the `lxf` binary: argument types, the subcommands and
//! their reports.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;
pub mod report;

pub use args::{Cli, Command};
pub use error::{CliError, CliResult};
