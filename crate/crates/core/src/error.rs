use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid parameters: {0}")]
    InvalidGamma(String),

    #[error("invalid cycle: {0}")]
    InvalidCycle(String),

    #[error("country {country} out of range (instance has {count} countries)")]
    CountryOutOfRange { country: usize, count: usize },

    #[error("cycle enumeration exceeded the budget of {limit} cycles")]
    EnumerationOverflow { limit: usize },

    #[error("branch-and-bound exceeded the budget of {limit} search nodes")]
    SearchBudgetExceeded { limit: u64 },

    #[error("brute force needs at most {cap} cycles, instance has {found}")]
    BruteForceCap { found: usize, cap: usize },

    #[error("exact distribution needs {needed} permutations, budget is {limit}")]
    PermutationCap { needed: String, limit: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid fixture: {0}")]
    InvalidFixture(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
