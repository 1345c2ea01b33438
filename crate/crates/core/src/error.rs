use thiserror::Error;

/// Malformed serialized input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("invalid rational literal {0:?}")]
    Rational(String),
    #[error("invalid json: {0}")]
    Json(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no simple Lie algebra of type {series}{rank}")]
    InvalidType { series: char, rank: usize },
    #[error("element has {got} coefficients, algebra has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("crossed node set must be nonempty")]
    EmptyCrossedSet,
    #[error("node {node} out of range for rank {rank}")]
    InvalidNode { node: usize, rank: usize },
    #[error("grading is not effective: {0}")]
    NotEffective(String),
    #[error("element is not central in g0")]
    NotCentral,
    #[error("element is not a scaling element")]
    NotScaling,
    #[error("element is not in p+")]
    NotInPPlus,
    #[error("arity {0} outside the supported range")]
    ArityOutOfRange(usize),
    #[error("cochain is not homogeneous of degree {expected}")]
    NotHomogeneous { expected: i32 },
    #[error("Hodge decomposition fails in arity {arity}, homogeneity {homogeneity}: {detail}")]
    HodgeFailure {
        arity: usize,
        homogeneity: i32,
        detail: String,
    },
    #[error("cochain is not in the image of the Laplacian (arity {arity}, homogeneity {homogeneity})")]
    NotInLaplacianImage { arity: usize, homogeneity: i32 },
    #[error("grading mismatch: {0}")]
    GradingMismatch(String),
    #[error("{0}")]
    Precondition(String),
    #[error(transparent)]
    Format(#[from] FormatError),
}

pub type Result<T> = std::result::Result<T, Error>;
