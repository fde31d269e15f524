use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of the gamma function at {re}{im:+}i")]
    Pole { re: f64, im: f64 },
    #[error("quadrature did not converge: estimate {estimate:e}, last change {change:e}")]
    ToleranceNotMet { estimate: f64, change: f64 },
    #[error("grid spacing {spacing} exceeds eps/4 = {limit}")]
    GridTooCoarse { spacing: f64, limit: f64 },
    #[error("parity violation: {0}")]
    Parity(String),
    #[error("index out of range: {0}")]
    Range(String),
    #[error("ratio depends on the sample point (spread {spread:e})")]
    InconsistentRatio { spread: f64 },
    #[error("character has conductor 0")]
    Conductor,
    #[error("division by zero in the selfdual term; use the limit form")]
    DivisionByZero,
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
