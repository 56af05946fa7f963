use thiserror::Error;

/// Errors raised by the library. The CLI maps each variant onto an exit code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Repeated points, identical edges, or another input that has no geometric meaning.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A parameter lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A precondition of a check does not hold for the input.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The requested work exceeds a configured budget.
    #[error("budget exceeded for {field}: requested {requested}, limit {limit}")]
    Budget {
        field: String,
        requested: u128,
        limit: u128,
    },

    /// A produced object failed its own postcondition check.
    #[error("verification failed: {0}")]
    Verification(String),
}

impl Error {
    pub(crate) fn budget(field: impl Into<String>, requested: u128, limit: u128) -> Self {
        Error::Budget {
            field: field.into(),
            requested,
            limit,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
