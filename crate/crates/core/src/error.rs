use thiserror::Error;

/// Errors surfaced by the numeric core and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {n}: {reason}")]
    InvalidDimension { n: usize, reason: &'static str },

    #[error("input has zero variance; cannot normalize")]
    ZeroVariance,

    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),

    #[error("input contains non-finite entries")]
    NonFiniteInput,

    #[error("index k={k} out of range 1..={n}")]
    IndexOutOfRange { k: usize, n: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigensolver failed to converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("invalid experiment config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
