//! Orchestration behind the `nilcycle` binary: unfolding plans, experiment
//! runners and deterministic report emission.

pub mod config;
pub mod experiments;
pub mod report;
pub mod unfold;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("the requested ladder cannot be realized: {0}")]
    UnachievableLadder(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("io error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
