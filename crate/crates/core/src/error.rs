use alloc::string::String;

/// Errors raised by constructions, searches and solvers.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("arc ({0}, {1}) has an endpoint outside the vertex range 0..{2}")]
    ArcOutOfRange(usize, usize, usize),
    #[error("mark {0} is outside the vertex range 0..{1}")]
    MarkOutOfRange(usize, usize),
    #[error("size parameter must be at least {min}, got {got}")]
    SizeTooSmall { min: usize, got: usize },
    #[error("unknown digraph name `{0}`")]
    UnknownName(String),
    #[error("construction would have {needed} vertices, above the cap of {cap}")]
    CapExceeded { needed: u128, cap: usize },
    #[error("enumeration budget of {0} labeled digraphs exhausted")]
    EnumerationBudget(u64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("search budget exhausted")]
    BudgetExhausted,
}

pub type Result<T> = core::result::Result<T, Error>;
