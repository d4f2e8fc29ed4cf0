use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix must be square and non-empty, got {rows}x{cols}")]
    Shape { rows: usize, cols: usize },

    #[error("non-finite entry {value} at ({row}, {col})")]
    NonFinite { row: usize, col: usize, value: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("eigenvalue iteration did not converge for eigenvalue {index} after {iterations} iterations")]
    EigenNoConvergence { index: usize, iterations: usize },

    #[error("closed form requires a verified zero mode")]
    NoZeroMode,

    #[error("closed form requires a real spectrum (max |Im λ| = {0:e})")]
    ComplexSpectrum(f64),

    #[error("closed form diverges: eigenvalue {eigenvalue} sits on or beyond the pole")]
    Divergent { eigenvalue: f64 },

    /// ρ(C·U) ≥ 1, or ρ(C) ≥ 1 for the unprojected series.
    #[error("outside validity domain: {quantity} = {value} (must be < 1)")]
    OutsideValidity { quantity: &'static str, value: f64 },

    #[error("series did not converge after {terms} terms (last relative term {residual:e})")]
    NotConverged { terms: usize, residual: f64 },

    #[error("network is not synchronizable under {kind} dynamics: {detail}")]
    NotSynchronizable { kind: &'static str, detail: String },

    #[error("numerical accuracy failure: {0}")]
    Numerical(String),
}
