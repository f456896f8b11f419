use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unsupported chip pulse: {0}")]
    UnsupportedPulse(String),

    #[error("spreading code length {0} is not a power of two")]
    CodeLengthNotPowerOfTwo(usize),

    #[error("delay {epsilon:e} s outside [0, {symbol_period:e}) s")]
    DelayOutOfRange { epsilon: f64, symbol_period: f64 },

    #[error("need at least {required} symbols, got {got}")]
    TooFewSymbols { required: usize, got: usize },

    #[error("{what} did not converge: {detail}")]
    NonConvergence { what: &'static str, detail: String },

    #[error("no positive rate meets outage target {pi0:e}")]
    InfeasibleDesign { pi0: f64 },

    #[error("secrecy rate {rate} exceeds zero-delay capacity {capacity}")]
    RateAboveCapacity { rate: f64, capacity: f64 },

    #[error("empty sweep range")]
    EmptyRange,

    #[error("abscissa not strictly increasing at index {0}")]
    NonIncreasingAbscissa(usize),

    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),

    #[error("config {path}: {reason}")]
    Config { path: PathBuf, reason: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
