use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid beam: {0}")]
    InvalidBeam(String),

    #[error("invalid slit geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid slit index {0} (expected 1 or 2)")]
    InvalidSlitIndex(i64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("fixed-point iteration did not converge after {iterations} steps (last iterates {previous:e}, {last:e})")]
    NonConvergence {
        iterations: usize,
        previous: f64,
        last: f64,
    },

    #[error("quadrature did not converge on [{lo:e}, {hi:e}]")]
    Quadrature { lo: f64, hi: f64 },

    #[error("trajectory never reaches the screen (theta = {theta:e} rad)")]
    NoScreenCrossing { theta: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("config digest mismatch: events were produced with {found}, config gives {expected}")]
    DigestMismatch { expected: String, found: String },

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// True for failures caused by bad input rather than numerics.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::NonConvergence { .. } | Error::Quadrature { .. } | Error::NoScreenCrossing { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
