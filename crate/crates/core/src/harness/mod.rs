//! Config-driven experiment runners that emit CSV / JSON data files plus a
//! checksummed manifest.

pub mod config;
pub mod manifest;
pub mod runs;
pub mod stats;

use std::path::Path;

use thiserror::Error;

use crate::chem::{ChemError, IntegralError};
use crate::engine::EngineError;
use crate::resource::ResourceError;

pub use config::{ExperimentConfig, ExperimentKind};
pub use manifest::{sha256_hex, OutputSink, RunManifest, MANIFEST_FILE};
pub use runs::{
    prepare_system, run_dynamics, run_experiment, run_lindep_report, run_resource_table, run_trotter_scan,
    run_variance_scan, DynamicsResult, LindepResult, PreparedSystem, ResourceResult, RunOptions, RunOutcome,
    TrotterResult, VarianceResult,
};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "QAS_OUT_DIR";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("output: {0}")]
    Output(String),
    #[error(transparent)]
    Integrals(#[from] IntegralError),
    #[error(transparent)]
    Chem(#[from] ChemError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Resource(#[from] ResourceError),
    #[error("sample {stream}: {source}")]
    Sample { stream: u64, source: EngineError },
}

impl HarnessError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        HarnessError::Io { path: path.display().to_string(), message: e.to_string() }
    }
}
