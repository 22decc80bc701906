use thiserror::Error;

use crate::element::Bidegree;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet mismatch: {0} vs {1}")]
    AlphabetMismatch(usize, usize),

    #[error("indices must be strictly increasing: {0:?}")]
    NotIncreasing(Vec<u32>),

    #[error("index {index} outside [1..{bound}]")]
    IndexOutOfRange { index: u32, bound: usize },

    #[error("bidegree mismatch: {0} vs {1}")]
    BidegreeMismatch(Bidegree, Bidegree),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("element is not invariant under permutation of tensor slots")]
    NotInvariant,

    #[error("leading term of the zero element")]
    ZeroElement,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cache entry {0} is corrupt")]
    CacheCorrupt(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
