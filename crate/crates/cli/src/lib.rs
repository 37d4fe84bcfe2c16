//! Library side of the `qwalk` command: configuration, output formats and
//! the subcommand implementations. `main.rs` only parses arguments.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use config::{GraphSource, RunConfig};
pub use error::{CliError, CliResult};
