use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = AddtError> = std::result::Result<T, E>;

/// Everything that can go wrong while loading data or fitting a model.
#[derive(Debug, Error)]
pub enum AddtError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("missing column: expected three columns (temperature, time, response), {0}")]
    MissingColumn(String),

    #[error("line {line}: non-numeric value {value:?} in column {column}")]
    NonNumeric {
        line: u64,
        column: &'static str,
        value: String,
    },

    #[error("line {line}: response must be strictly positive, got {value}")]
    NonPositiveResponse { line: u64, value: f64 },

    #[error("line {line}: time must be non-negative, got {value}")]
    NegativeTime { line: u64, value: f64 },

    #[error("temperature {0} °C is at or below absolute zero")]
    NonPhysicalTemperature(f64),

    #[error("fewer than two temperature levels with observations after time 0 (found {0})")]
    TooFewLevels(usize),

    #[error(
        "no time-0 measurements to compute the initial degradation level; supply an initial value"
    )]
    NoInitialValue,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate temperature-time line (beta0 = {beta0}, beta1 = {beta1}): log10(target time) equals the intercept")]
    DegenerateLine { beta0: f64, beta1: f64 },

    #[error("the degradation path never reaches the failure threshold {threshold}: {detail}")]
    NoCrossing { threshold: f64, detail: String },

    #[error("no sign change of the function on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("objective is not finite at {context}")]
    NonFinite { context: String },

    #[error("rank-deficient design matrix ({0})")]
    RankDeficient(String),

    #[error("no convergence after {iterations} iterations (best objective {value}, best point {point:?})")]
    NonConvergence {
        iterations: usize,
        value: f64,
        point: Vec<f64>,
    },

    #[error("the fit has no covariance matrix")]
    MissingCovariance,

    #[error("unknown dataset {name:?}; available: {choices}")]
    UnknownDataset { name: String, choices: String },
}
