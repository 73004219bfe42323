use std::path::PathBuf;

use thiserror::Error;

/// Rejections from graph construction and parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("half-edge {0} appears in more than one vertex cell")]
    OverlappingCells(usize),
    #[error("half-edge {0} is not covered by the pairing")]
    DanglingHalfEdge(usize),
    #[error("half-edge {0} is paired with itself")]
    SelfPaired(usize),
    #[error("half-edge {0} appears in more than one pair")]
    DoublyPaired(usize),
    #[error("vertex cell of size {0}; only sizes 1 and 3 are allowed")]
    BadCellSize(usize),
    #[error("half-edge id {0} out of range for {1} half-edges")]
    OutOfRange(usize, usize),
    #[error("malformed graph text: {0}")]
    Parse(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed graph: {0}")]
    MalformedGraph(#[from] GraphError),
    #[error("degree {degree} exceeds the configured ceiling {limit}")]
    ResourceLimit { degree: usize, limit: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("corrupt catalog cache {path}: {reason}")]
    CacheCorrupt { path: PathBuf, reason: String },
    #[error("class `{0}` is not in the basis catalog")]
    UnknownClass(String),
    #[error("{0} is not a prime above 2^20")]
    BadPrime(u64),
    #[error("invalid weight system: {0}")]
    WeightSystem(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
