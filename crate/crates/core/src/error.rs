use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("simplex stalled after {pivots} pivots")]
    SolverStall { pivots: usize },

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("unidentifiable model: {0}")]
    Unidentifiable(String),

    #[error("no convergence after {0} iterations")]
    IterationLimit(usize),

    #[error("dominance check violated: {0}")]
    DominanceViolation(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_)
            | Error::Precondition(_)
            | Error::Config(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::Csv(_)
            | Error::Unidentifiable(_) => 2,
            Error::SolverStall { .. } | Error::Solver(_) | Error::IterationLimit(_) => 3,
            Error::DominanceViolation(_) => 4,
        }
    }
}
