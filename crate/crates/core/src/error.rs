//! Error type shared by every module.

use thiserror::Error;

/// Errors raised by the library. The variants map onto the CLI exit-code
/// categories: validation (2), numerical (3) and I/O (4).
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: wrong dimensions, empty lists, out-of-range indices.
    #[error("input error: {0}")]
    Input(String),

    /// A value lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A problem description that cannot be built (e.g. a singular matrix).
    #[error("construction error: {0}")]
    Construction(String),

    /// Configuration rejected at load time; `field` names the offending key.
    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },

    /// Non-finite values or an iteration that failed to converge.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// Non-finite gradient encountered inside the optimizer.
    #[error("numerical error at step {step}: {message}")]
    NumericalAtStep { step: u64, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: msg.into(),
        }
    }

    /// Process exit code for this error category.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Domain(_) | Error::Construction(_) | Error::Config { .. } => 2,
            Error::Numerical(_) | Error::NumericalAtStep { .. } => 3,
            Error::Io { .. } => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
