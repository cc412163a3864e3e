use std::path::PathBuf;

use num_complex::Complex64;

/// Errors raised by the polynomial, geometry, solver and experiment layers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(&'static str),

    #[error("degree {degree} is too low, need at least {required}")]
    DegreeTooLow { degree: usize, required: usize },

    #[error("critical points are ill-conditioned: residual {residual:e} exceeds {tolerance:e}")]
    IllConditioned { residual: f64, tolerance: f64 },

    #[error("Newton derivative vanished at {at}")]
    DerivativeZero { at: Complex64 },

    #[error("cascade level {level} found {found} of {expected} roots")]
    LevelIncomplete {
        level: usize,
        found: usize,
        expected: usize,
    },

    #[error("deflation remainder {remainder:e} exceeds bound {bound:e}")]
    BadRoot { remainder: f64, bound: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("report schema error: {0}")]
    Schema(String),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
