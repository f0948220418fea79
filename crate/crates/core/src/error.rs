use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("covariance violates the uncertainty relation (min eigenvalue {min_eig:.3e})")]
    UncertaintyViolation { min_eig: f64 },
    #[error("channel is not completely positive (min eigenvalue {min_eig:.3e})")]
    NotCompletelyPositive { min_eig: f64 },
    #[error("negative parameter: {0}")]
    NegativeParameter(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("eigen-decomposition failed: {0}")]
    EigenFailure(String),
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("solver stalled: {0}")]
    SolverStall(String),
    #[error("infeasible input: {0}")]
    InfeasibleInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::OutOfRange(msg()))
    }
}
