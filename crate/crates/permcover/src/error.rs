use thiserror::Error;

/// Crate-wide error type.
///
/// Resource exhaustion is deliberately a distinct outcome: the general cover
/// decision problem is NP-complete, so budgets must surface as "don't know",
/// never as a wrong YES/NO.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("resource budget exhausted: {0}")]
    ResourceExhausted(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A documented operation precondition does not hold (for example,
    /// criticalize on an input that is already coverable).
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
