//! Crate-wide error type and result alias.

use thiserror::Error;

/// Errors produced by samplers, estimators, oracles, and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A model or estimator parameter violates its domain constraint.
    #[error("invalid parameter `{name}` = {value}: must satisfy {constraint}")]
    InvalidParameter {
        name: String,
        value: String,
        constraint: String,
    },

    /// An order-statistic count is outside its admissible range.
    #[error("invalid k = {k} for sample size n = {n}: must satisfy {constraint}")]
    InvalidCount {
        k: usize,
        n: usize,
        constraint: String,
    },

    /// The operation needs data the input does not provide.
    #[error("empty input: {context}")]
    EmptyInput { context: String },

    /// Tail estimation needs strictly positive observations.
    #[error("nonpositive value {value} at position {index}: tail estimation needs positive data")]
    NonPositiveData { index: usize, value: f64 },

    /// The top-k observations are all equal, so the mean log-excess is zero.
    #[error("degenerate data: top {k} values are all equal, tail index is undefined")]
    DegenerateData { k: usize },

    /// An L-moment generalized Pareto fit produced a non-heavy-tailed shape.
    #[error("fitted shape {shape} is not heavy-tailed (need shape > 0)")]
    NonHeavyTail { shape: f64 },

    /// A Monte Carlo oracle observed too few conditioning exceedances.
    #[error("only {observed} exceedances observed (need at least {needed}): increase the budget or the level p")]
    InsufficientExceedances { needed: usize, observed: usize },

    /// The requested analytic form does not exist for this model family.
    #[error("unsupported model for this oracle: {context}")]
    UnsupportedModel { context: String },

    /// Two return series share no common dates.
    #[error("the two series have no overlapping dates")]
    EmptyOverlap,

    /// A text input (CSV, plan file) failed to parse.
    #[error("parse error in {source_name} line {line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    /// An underlying filesystem operation failed.
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable tag for this error, used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::InvalidCount { .. } => "invalid_count",
            Error::EmptyInput { .. } => "empty_input",
            Error::NonPositiveData { .. } => "nonpositive_data",
            Error::DegenerateData { .. } => "degenerate_data",
            Error::NonHeavyTail { .. } => "non_heavy_tail",
            Error::InsufficientExceedances { .. } => "insufficient_exceedances",
            Error::UnsupportedModel { .. } => "unsupported_model",
            Error::EmptyOverlap => "empty_overlap",
            Error::Parse { .. } => "parse_error",
            Error::Io(_) => "io_error",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
