use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported field order {0}: expected a prime or 4")]
    UnsupportedField(u64),

    #[error("division by zero")]
    DivisionByZero,

    #[error("operands belong to different fields ({left} vs {right})")]
    FieldMismatch { left: String, right: String },

    #[error("arity mismatch: expected {expected} values, got {found}")]
    ArityError { expected: usize, found: usize },

    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    ShapeError { rows: usize, cols: usize },

    #[error("state space has {states} states, above the enumeration bound {bound}; raise --bound or FDSLAB_BOUND if this is intended")]
    TooLarge { states: u128, bound: u64 },

    #[error("inconsistent data: {0}")]
    InconsistentData(String),

    #[error("duplicate point {0}")]
    DuplicatePoint(String),

    #[error("function does not depend on variable x{0}")]
    NotEssentialArity(usize),

    #[error("empty data")]
    EmptyData,

    #[error("no minimal primes to rank")]
    EmptyRanking,

    #[error("cell {cell} is not White and cannot be inoculated")]
    IllegalControl { cell: usize },

    #[error("initial state is not admissible: {0}")]
    InadmissibleStart(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid argument: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Relocate a parse error produced on a single-line fragment that starts
    /// at `column_offset + 1` of file line `line`.
    pub(crate) fn at(self, line: usize, column_offset: usize) -> Self {
        match self {
            Error::Parse {
                column, message, ..
            } => Error::Parse {
                line,
                column: column + column_offset,
                message,
            },
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
