use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,
    #[error("vector is not primitive")]
    NotPrimitive,
    #[error("cone contains a line")]
    NotStronglyConvex,
    #[error("cone is not full-dimensional")]
    Degenerate,
    #[error("cone is not simplicial")]
    NotSimplicial,
    #[error("point does not lie in the cone")]
    NotInCone,
    #[error("cone is not a face")]
    NotAFace,
    #[error("level must be positive")]
    NonPositiveLevel,
    #[error("level mismatch")]
    LevelMismatch,
    #[error("weight is not general: it is orthogonal to {0}")]
    NonGeneral(String),
    #[error("linear functional has no unique minimizing vertex")]
    NonUniqueMinimum,
    #[error("no candidate arrow directions within the search bound")]
    NoCandidates,
    #[error("budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: usize, budget: usize },
    #[error("not a subdivision: {0}")]
    InvalidSubdivision(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("unsupported rank {0}")]
    UnsupportedRank(usize),
    #[error("invariant violated: {0}")]
    Invariant(String),
}
