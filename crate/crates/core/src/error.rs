use std::io;

use thiserror::Error;

/// Errors produced by the phase-space engine.
#[derive(Debug, Error)]
pub enum Error {
    /// A series that the caller asked to sum does not converge.
    #[error("series diverges for exponent {exponent}")]
    DivergentSeries { exponent: f64 },

    /// The grid cannot hold the function or basis order being processed.
    #[error("grid too small: {reason}")]
    GridTooSmall { reason: String },

    /// Two grids (or grid axes) that must coincide do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A grid specification violates its invariants.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// The operation needs a different coefficient-model variant.
    #[error("wrong model variant: {0}")]
    WrongVariant(&'static str),

    /// An exponent outside the admissible range.
    #[error("bad exponent r = {r}: must exceed 1")]
    BadExponent { r: f64 },

    /// A textual input (model grammar, grid flag, CSV cell) failed to parse.
    #[error("parse error: {0}")]
    Parse(String),

    /// A file did not match the expected on-disk layout.
    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
