use thiserror::Error;

/// Errors raised for inputs that violate an operation's preconditions.
///
/// Protocol aborts are not errors; they are reported through
/// [`SessionOutcome::abort`](crate::protocol::SessionOutcome::abort).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is rank deficient (rank {rank}, need {needed})")]
    RankDeficient { rank: usize, needed: usize },

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("rate {rate} is not below the achievable bound {bound} for {variant}")]
    RateTooHigh {
        variant: String,
        rate: f64,
        bound: f64,
    },

    #[error("enumeration budget exceeded: {estimate} leaves > {budget}")]
    BudgetExceeded { estimate: u128, budget: u128 },

    #[error("inconsistent channel observations at position {0}")]
    Conflict(usize),

    #[error("unknown party `{0}`")]
    UnknownParty(String),

    #[error("replay mismatch: {0}")]
    Replay(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
