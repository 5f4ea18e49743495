use thiserror::Error;

/// Errors shared by every computation in the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input; the message names the violated precondition.
    #[error("invalid input: {0}")]
    Input(String),
    /// A configured resource budget was exhausted.
    #[error("resource budget exceeded: {budget} (reached depth {depth})")]
    Resource { budget: String, depth: usize },
    /// A ball is too small for the requested query.
    #[error("radius too small: need at least {required}, have {actual}")]
    Radius { required: usize, actual: usize },
    /// A construction produced something it should not have (e.g. a non-flag clique).
    #[error("construction failed: {0}")]
    Construction(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    /// Short machine-readable reason code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Input(_) => "invalid-input",
            Error::Resource { .. } => "resource-budget",
            Error::Radius { .. } => "radius",
            Error::Construction(_) => "construction",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
