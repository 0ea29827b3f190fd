use std::fmt;

use dataset_trust::TrustError;

/// A failed command and the exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or configuration; exit code 2.
    Usage(String),
    /// Data or computation failure; exit code 1.
    Domain(TrustError),
    /// A domain error caused by a missing flag, reported as usage.
    UsageDomain(TrustError, String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Usage(_) | CliError::UsageDomain(..) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Domain(e) => write!(f, "error[{}]: {e}", e.kind()),
            CliError::UsageDomain(e, hint) => write!(f, "usage error[{}]: {e} ({hint})", e.kind()),
        }
    }
}

impl From<TrustError> for CliError {
    fn from(e: TrustError) -> Self {
        CliError::Domain(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
