use std::fmt;

use thiserror::Error;

/// The two sorts of a polarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Object,
    Feature,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Object => "object",
            Sort::Feature => "feature",
        })
    }
}

/// A syntax error in a formula or inequality, positioned 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at {line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A malformed `.cxt` or `.rel` file.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid context: {0}")]
    InvalidContext(String),

    #[error("{sort} index {index} out of bounds (size {len})")]
    OutOfBounds {
        sort: Sort,
        index: usize,
        len: usize,
    },

    #[error("unknown {sort} `{name}`")]
    UnknownName { sort: Sort, name: String },

    #[error("unbound proposition `{0}`")]
    UnboundProp(String),

    #[error("unknown agent {0}")]
    UnknownAgent(u32),

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("sort mismatch: `{term}` used as {expected}")]
    SortMismatch { term: String, expected: Sort },

    #[error("not a concept of this lattice: {0}")]
    ForeignConcept(String),

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("degenerate result: {0}")]
    Degenerate(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid box string: {0}")]
    InvalidBoxString(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Format(#[from] FormatError),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
