//! Configuration, commands and output tables behind the `qwalk` binary.

pub mod commands;
pub mod config;
mod error;
pub mod output;

pub use commands::Options;
pub use config::{LoadedConfig, RunConfig};
pub use error::{CliError, EXIT_CONFIG, EXIT_IO, EXIT_NUMERICAL, EXIT_OK};
