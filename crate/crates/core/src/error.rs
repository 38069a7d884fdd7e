use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a supported prime (need 2 <= p <= 97)")]
    NotPrime(u32),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    BudgetExceeded { what: String, needed: u64, limit: u64 },

    #[error("subspace containment violated; witness vector {witness:?}")]
    NotContained { witness: Vec<(usize, u32)> },

    #[error("structure mismatch: {0}")]
    Mismatch(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("window too small: {0}")]
    Window(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    /// A structural identity failed on a constructed object. Always a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn budget(what: impl Into<String>, needed: u64, limit: u64) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            needed,
            limit,
        }
    }
}
