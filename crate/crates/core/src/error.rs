use thiserror::Error;

/// Errors produced by the workbench.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("field value {value} outside the target domain [{lo}, {hi}]")]
    OutOfDomain { value: f64, lo: f64, hi: f64 },

    /// No topologically nontrivial solution exists for the requested model.
    #[error("no soliton: {0}")]
    NoSoliton(String),

    #[error("slope singularity at the vacuum is not integrable: {0}")]
    NonIntegrable(String),

    #[error("no sign change of {what} on [{lo}, {hi}]")]
    NoSignChange { what: &'static str, lo: f64, hi: f64 },

    #[error("quadrature did not converge: estimate {estimate}, error {error}")]
    Quadrature { estimate: f64, error: f64 },

    #[error("optimizer did not converge, best value {best} at {location:?}")]
    Optimizer { best: f64, location: Vec<f64> },

    #[error("grid: {0}")]
    Grid(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("sector mismatch: {0}")]
    SectorMismatch(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
