use std::path::PathBuf;

use thiserror::Error;

/// Failures of the special-function kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("domain error in {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },
    #[error("{function} did not converge after {terms} terms")]
    NoConvergence { function: &'static str, terms: usize },
}

impl SpecFunError {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        SpecFunError::Domain {
            function,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),

    /// A parameter violates a documented invariant. `field` names the offending input.
    #[error("invalid `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    /// The requested metric is not defined for these parameters.
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("output error: {0}")]
    Output(String),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Process exit code used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter { .. } | Error::Config(_) => 1,
            Error::SpecFun(_) | Error::UnsupportedRegime(_) => 2,
            Error::Io { .. } | Error::Output(_) => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
