use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value {value} at node {node}")]
    Evaluation { node: usize, value: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    #[error("precondition violated: fixed-point residual {residual:e} exceeds {threshold:e}")]
    PreconditionViolation { residual: f64, threshold: f64 },

    #[error("iteration diverged at step {iteration}: {reason}")]
    Divergence {
        iteration: usize,
        reason: String,
        last_iterate: Vec<f64>,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
