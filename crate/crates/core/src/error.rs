use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rejected input: {0}")]
    RejectedInput(String),

    #[error("point outside the domain: {0}")]
    Domain(String),

    #[error("chart mismatch: expected {expected}, got {got}")]
    ChartMismatch { expected: &'static str, got: &'static str },

    #[error("inconsistent coordinates: {0}")]
    Inconsistent(String),

    #[error("degenerate form (smallest |eigenvalue| {smallest:e})")]
    Degenerate { smallest: f64 },

    #[error("dimension {dim} too small: {what}")]
    DimensionTooSmall { dim: usize, what: &'static str },

    #[error("matrix logarithm failed: {0}")]
    LogFailure(String),

    #[error("ambiguous rank: gap ratio {gap:e} below threshold")]
    AmbiguousRank { gap: f64, singular_values: Vec<f64> },

    #[error("integration step underflow after {steps} steps")]
    StepUnderflow { steps: usize },

    #[error("base or scale mismatch between tractors")]
    TractorMismatch,

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
