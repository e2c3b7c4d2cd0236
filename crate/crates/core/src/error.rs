use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// The gate graph is not a single-output DAG.
    #[error("malformed circuit: {0}")]
    Structural(String),
    #[error("arithmetic error: {0}")]
    Arithmetic(String),
    #[error("input gate {gate} is not a singleton vector")]
    NonSingleton { gate: usize },
    #[error("no label mapping for input gate {gate}")]
    MissingLabel { gate: usize },
    #[error("negative coefficient on input gate {gate}; this algorithm works over the naturals")]
    NegativeCoefficient { gate: usize },
    #[error("not found: {0}")]
    NotFound(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("step budget exhausted ({used} of {limit} steps)")]
    BudgetExceeded { used: u64, limit: u64 },
    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("hash failure: {0}")]
    HashFailure(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
