use thiserror::Error;

/// Errors raised by the engine.
///
/// The variants map onto distinct process exit codes in the command-line
/// front end (see [`Error::exit_code`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-range input data.
    #[error("invalid input: {0}")]
    Input(String),
    /// A configured resource budget would be exceeded.
    #[error("resource budget exceeded: {what} needs {needed}, limit is {limit}")]
    Resource {
        what: String,
        needed: u64,
        limit: u64,
    },
    /// Well-formed input that violates a mathematical precondition,
    /// e.g. a cochain that is not a cocycle.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Exact arithmetic failure such as inverting zero.
    #[error("arithmetic error: {0}")]
    Arithmetic(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn resource(what: impl Into<String>, needed: u64, limit: u64) -> Self {
        Error::Resource {
            what: what.into(),
            needed,
            limit,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) => 2,
            Error::Resource { .. } => 3,
            Error::Precondition(_) | Error::Arithmetic(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
