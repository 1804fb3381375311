use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("series not convergent: {0}")]
    NotConvergent(String),
    #[error("sign pattern infeasible: {0}")]
    PatternInfeasible(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
