//! Command-line front end for the IRS link model: configuration files,
//! parameter sweeps, optimal-power reports and self validation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod manifest;
pub mod plot;
pub mod report;
pub mod sweep;
pub mod validate;

use thiserror::Error;

pub use config::{ConfigError, RunConfig};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VALIDATION_FAILED: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const NUMERIC: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Model(#[from] irs_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("validation failed")]
    ValidationFailed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use irs_core::Error as E;
        match self {
            CliError::ValidationFailed => exit::VALIDATION_FAILED,
            CliError::Config(_) | CliError::Io { .. } | CliError::Usage(_) => exit::CONFIG,
            CliError::Model(
                E::InvalidDimension { .. }
                | E::DimensionMismatch { .. }
                | E::InvalidParameter { .. },
            ) => exit::CONFIG,
            CliError::Model(_) => exit::NUMERIC,
        }
    }
}
