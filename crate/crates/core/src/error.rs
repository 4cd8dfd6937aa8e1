use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("invalid basis index: {0}")]
    Index(String),
    #[error("singular recursion: (alpha+1)/2 + n = 0 at n = {0}")]
    SingularRecursion(f64),
    #[error("signal cannot supply derivative of order {order} at 0: {reason}")]
    MissingDerivative { order: usize, reason: String },
    #[error("{signal} is not differentiable at 0 (order {order} requested)")]
    NonDifferentiable { signal: String, order: usize },
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("reference signal has zero norm")]
    ZeroNorm,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
