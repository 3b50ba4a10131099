use thiserror::Error;

/// Errors raised by presentation loading and the bounded enumerations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("undeclared generator in `{0}`")]
    UndeclaredGenerator(String),

    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),

    #[error("relation `{relation}` is not homogeneous ({lhs_len} letters vs {rhs_len})")]
    NonHomogeneous {
        relation: String,
        lhs_len: usize,
        rhs_len: usize,
    },

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("resource limit exceeded while {what} (level {level})")]
    ResourceLimit { what: String, level: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
