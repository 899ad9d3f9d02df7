use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by the zero rational function")]
    DivisionByZero,

    #[error("evaluation at a pole (x = {location})")]
    Pole { location: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("seed of step {step} does not solve its source potential (max residual {residual:e})")]
    SeedValidation { step: usize, residual: f64 },

    #[error("wavefunction vanishes on the integration path near x = {location}")]
    ZeroOnPath { location: f64 },

    #[error("matching system is singular: {0}")]
    Matching(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}
