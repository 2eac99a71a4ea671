// SPDX-License-Identifier: MIT OR Apache-2.0

use thiserror::Error;

/// Errors raised by the library layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate range: min {min} is not below max {max}")]
    DegenerateRange { min: f64, max: f64 },

    #[error("non-finite sample at position {index}")]
    NonFinite { index: usize },

    #[error("window too small: need at least {required} samples, got {actual}")]
    WindowTooSmall { required: usize, actual: usize },

    #[error("invalid window size {0}: must be at least 2")]
    InvalidWindow(usize),

    #[error("invalid bin count {bins} for window {delta}: need 2 <= k <= delta")]
    InvalidBinCount { bins: usize, delta: usize },

    #[error("invalid logarithm base {0}: must be finite and greater than 1")]
    InvalidBase(f64),

    #[error("series shorter than window: {len} samples, window {delta}")]
    SeriesTooShort { len: usize, delta: usize },

    #[error("entropy sequence too short: {len} values, need at least {required}")]
    SequenceTooShort { len: usize, required: usize },

    #[error("time {t} has no covered entropy values within {delta} steps")]
    OutOfRange { t: usize, delta: usize },

    #[error("invalid detector parameters: {0}")]
    InvalidParams(String),

    #[error("invalid segment spec #{index}: {reason}")]
    InvalidSpec { index: usize, reason: String },

    #[error("no segments")]
    NoSegments,

    #[error("probability at position {index} is outside [0, 1]")]
    InvalidProbability { index: usize },

    #[error("probabilities sum to {0}, expected 1")]
    NotNormalized(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
