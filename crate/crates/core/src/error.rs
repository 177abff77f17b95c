use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(String),

    #[error("input vectors are linearly dependent")]
    DependentVectors,

    #[error("gram matrix is not exceptional (upper unitriangular)")]
    NotExceptional,

    #[error("basis is not exceptional: {0}")]
    NotExceptionalBasis(String),

    #[error("Serre operator is not integral on the lattice")]
    NonIntegralSerre,

    #[error("lattice is not of surface type")]
    NotSurface,

    #[error("lattice is not of surface* type")]
    NotSurfaceStar,

    #[error("invalid codimension filtration: {0}")]
    InvalidFiltration(String),

    #[error("element is not in the required filtration step: {0}")]
    NotInFiltration(String),

    #[error("element has rank zero")]
    ZeroRank,

    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: i64, rank: usize },

    #[error("not a solution: {0}")]
    NotASolution(String),

    #[error("parameter must be non-negative, got {0}")]
    NegativeParameter(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}
