//! Scenario-driven front end for `psa-core`: coefficient reports, parameter
//! scans, phasor traces and ODE cross-checks.

pub mod commands;
pub mod report;
pub mod scenario;

use psa_core::PsaError;
use thiserror::Error;

pub use commands::{run, Command, Document, Output};
pub use report::{Format, Report, Table};
pub use scenario::Scenario;

/// Scan variables understood by `scan`.
pub const SCAN_VARIABLES: [&str; 5] = ["theta_s0_rad", "theta_s0_phi_rad", "P2_W", "tau", "length_m"];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("unknown scan variable `{0}` (expected one of: theta_s0_rad, theta_s0_phi_rad, P2_W, tau, length_m)")]
    UnknownScanVariable(String),

    #[error("numerical check failed: {0}")]
    NumericCheck(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) | CliError::UnknownScanVariable(_) => 3,
            CliError::NumericCheck(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<PsaError> for CliError {
    fn from(e: PsaError) -> Self {
        CliError::Validation(e.to_string())
    }
}
