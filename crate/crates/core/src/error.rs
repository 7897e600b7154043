use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {dim}: need at least {min}")]
    InvalidDimension { dim: usize, min: usize },

    #[error("truncation at dim {dim} leaves tail population {tail:.3e} (limit {limit:.1e})")]
    Truncation { dim: usize, tail: f64, limit: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("device file field `{field}`: {reason}")]
    Validation { field: String, reason: String },

    #[error("quadrature did not converge: last estimates {previous:e} and {last:e}")]
    Convergence { previous: f64, last: f64 },

    #[error("integrator failure at t = {t:e} s: {reason}")]
    Integrator { t: f64, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    /// Errors caused by numerics rather than user input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Truncation { .. } | Error::Convergence { .. } | Error::Integrator { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
