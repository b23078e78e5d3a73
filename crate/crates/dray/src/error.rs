use thiserror::Error;

/// Errors across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cone is not pointed: dual rank {rank} < ambient dimension {dim}")]
    NotPointed { rank: usize, dim: usize },

    #[error("cone is not full-dimensional: no strictly interior point")]
    NotFullDimensional,

    #[error("index set is not invariant under the group")]
    NotInvariant,

    #[error("group order exceeds the materialization bound {bound}")]
    GroupTooLarge { bound: usize },

    #[error("resource guard exceeded: {0}")]
    ResourceGuard(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
