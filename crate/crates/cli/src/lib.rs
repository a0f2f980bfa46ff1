//! Command-line driver: instance generation, analysis, simulated
//! measurements, recovery and benchmarking, all through JSON files.

pub mod args;
pub mod commands;
pub mod report;

use std::path::PathBuf;

pub use args::Cli;

/// Exit status classes.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Failed(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

/// What a command produced: the primary text (stdout or `--output`), extra
/// files to write, and the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub files: Vec<(PathBuf, String)>,
    pub exit_code: u8,
}

impl Output {
    pub fn ok(text: String) -> Self {
        Self {
            text,
            files: Vec::new(),
            exit_code: 0,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    commands::dispatch(cli)
}
