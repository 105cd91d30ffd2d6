use std::io;
use std::path::PathBuf;

use qw_core::WalkError;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: cannot read config: {source}", path.display())]
    ReadConfig { path: PathBuf, source: io::Error },

    /// Malformed JSON or a value of the wrong shape.
    #[error("{}:{line}:{column}: {message}", path.display())]
    Schema {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    /// Well-formed config with an out-of-range or inconsistent value.
    #[error("{}", anchored(path, *line, message))]
    Invalid {
        path: PathBuf,
        line: Option<usize>,
        message: String,
    },

    #[error("walk failed: {0}")]
    Walk(#[from] WalkError),

    #[error("cannot write {}: {message}", path.display())]
    Output { path: PathBuf, message: String },

    #[error("cannot start worker threads: {0}")]
    Threads(String),
}

fn anchored(path: &std::path::Path, line: Option<usize>, message: &str) -> String {
    match line {
        Some(line) => format!("{}:{line}: {message}", path.display()),
        None => format!("{}: {message}", path.display()),
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ReadConfig { .. } | CliError::Schema { .. } | CliError::Invalid { .. } => {
                EXIT_CONFIG
            }
            CliError::Walk(e) if e.is_numerical() => EXIT_NUMERICAL,
            CliError::Walk(_) => EXIT_CONFIG,
            CliError::Output { .. } | CliError::Threads(_) => EXIT_IO,
        }
    }

    pub(crate) fn output(path: &std::path::Path, message: impl ToString) -> Self {
        CliError::Output {
            path: path.to_path_buf(),
            message: message.to_string(),
        }
    }
}
