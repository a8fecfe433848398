//! Library side of the `plemelj` command: domain-map sweeps, functional reports
//! and verification suites.

pub mod domain_map;
pub mod report;
pub mod verify;

use std::fmt;
use thiserror::Error;

pub use domain_map::{parse_grid, run_domain_map, write_domain_map, DomainMapRequest, Grid, MapKernel, MapRow};
pub use report::{run_functional, write_report, FunctionalReport};
pub use verify::{run_verify, Check, Suite};

/// Failures surfaced by the command, each mapped to an exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Parse(String),

    #[error("{0}")]
    Compute(#[from] plemelj_core::Error),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("{0}")]
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => 2,
            CliError::Compute(_) | CliError::Io { .. } | CliError::CheckFailed(_) => 1,
        }
    }

    pub(crate) fn io(path: impl fmt::Display, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_string(), source }
    }
}

/// 17 significant digits, lowercase scientific.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}
