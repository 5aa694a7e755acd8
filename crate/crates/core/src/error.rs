use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("GF({p}^{e}) exceeds the supported field size 2^16")]
    FieldTooLarge { p: u32, e: u32 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{what} exceeds the configured budget of {budget}")]
    BudgetExceeded { what: &'static str, budget: u64 },
    #[error("missing Ramsey table entry R({k};{r},{s})")]
    MissingRamseyEntry { k: u32, r: u32, s: u32 },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
