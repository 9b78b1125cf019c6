//! Experiment harness for `disklab`: configuration files, named experiments and
//! CSV/JSON reports.

pub mod commands;
pub mod config;
pub mod experiments;
pub mod family;
pub mod report;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("bad {key} spec '{spec}': {source}")]
    Spec {
        key: String,
        spec: String,
        #[source]
        source: disklab::Error,
    },
    #[error(transparent)]
    Core(#[from] disklab::Error),
    #[error("unknown experiment '{0}'")]
    UnknownExperiment(String),
    #[error("io: {0}")]
    Io(String),
}

pub use config::{ExperimentConfig, OutputFormat};
pub use experiments::{run_experiment, EXPERIMENTS};
pub use report::{Report, Value};
