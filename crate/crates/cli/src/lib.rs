//! Command implementations, verification suites and reports for the `ldspec` binary.

pub mod commands;
pub mod report;
pub mod suites;

use std::fmt;

pub use report::{Check, Report, Status};

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPABILITY: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Capability(String),
    /// A requested operation was refused by the mathematics, e.g. a vector outside a domain.
    Refused(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Capability(_) => EXIT_CAPABILITY,
            CliError::Refused(_) => EXIT_CHECK_FAILED,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Capability(m) => write!(f, "capability error: {m}"),
            CliError::Refused(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ldspec::Error> for CliError {
    fn from(e: ldspec::Error) -> Self {
        use ldspec::Error as E;
        match e {
            E::Input(_) | E::Normalization(_) => CliError::Usage(e.to_string()),
            E::Capability(_) | E::NotRepresentable(_) => CliError::Capability(e.to_string()),
            E::Domain(_) | E::OperatorBounded(_) => CliError::Refused(e.to_string()),
        }
    }
}

/// Settings shared by every command.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Context {
    /// Multiplies every tolerance.
    pub tol_scale: f64,
    pub seed: u64,
    pub timings: bool,
}

impl Default for Context {
    fn default() -> Self {
        Self {
            tol_scale: 1.0,
            seed: 42,
            timings: false,
        }
    }
}

impl Context {
    pub fn tol(&self, t: f64) -> f64 {
        t * self.tol_scale
    }

    /// Reads `LDSPEC_TOL_SCALE`.
    pub fn tol_scale_from_env() -> Result<f64, CliError> {
        match std::env::var("LDSPEC_TOL_SCALE") {
            Err(_) => Ok(1.0),
            Ok(v) => match v.trim().parse::<f64>() {
                Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
                _ => Err(CliError::Usage(format!(
                    "LDSPEC_TOL_SCALE must be a positive number, got {v:?}"
                ))),
            },
        }
    }
}
