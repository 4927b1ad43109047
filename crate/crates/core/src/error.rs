use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field parameters: {0}")]
    InvalidParams(String),
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("degenerate form: {0}")]
    Degenerate(String),
    #[error("invalid invariants: {0}")]
    InvalidInvariants(String),
    #[error("not a unit: {0}")]
    NotUnit(String),
    #[error("not in F0: {0}")]
    NotInBaseField(String),
    #[error("not hermitian: {0}")]
    NotHermitian(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("budget exceeded: job needs {needed} candidate evaluations, budget is {budget}")]
    Budget { needed: u128, budget: u128 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("assembly mismatch: {0}")]
    Mismatch(String),
    #[error("calibration failed: {0}")]
    Calibration(String),
}

pub type Result<T> = std::result::Result<T, Error>;
