use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid rank {rank} for type {family}")]
    InvalidRank { family: String, rank: usize },
    #[error("invalid signed permutation {0:?}")]
    InvalidPerm(Vec<i32>),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{0} is not supported here")]
    UnsupportedKind(String),
    #[error("invalid counts: n = {n}, n0 = {n0}")]
    InvalidCounts { n: usize, n0: usize },
    #[error("invalid two-row configuration: {0}")]
    InvalidConfig(String),
    #[error("wall {wall} out of range 1..{max}")]
    InvalidWall { wall: usize, max: usize },
    #[error("parameter {0} must be nonzero here")]
    ZeroParameter(&'static str),
    #[error("argument out of range: {0}")]
    Range(String),
    #[error("chain has {closed} closed classes, expected exactly one")]
    NotIrreducible { closed: usize },
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),
    #[error("point is on a hyperplane of the affine arrangement")]
    NonGenericPoint,
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
