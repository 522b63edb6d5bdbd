use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("characteristic {0} is not allowed here (need char != 2, 3)")]
    BadCharacteristic(u64),
    #[error("denominator of {value} vanishes modulo {p}")]
    DenominatorVanishes { value: String, p: u64 },
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subspaces live in different ambient spaces ({left} vs {right})")]
    AmbientMismatch { left: usize, right: usize },
    #[error("index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("tensor is degenerate (first flattening has rank {rank} < {dim})")]
    Degenerate { rank: usize, dim: usize },
    #[error("tensor is not a twisted superpotential")]
    NotTwisted,
    #[error("subspace is not stable under the twist action")]
    NotStable,
    #[error("ambient dimension {ambient} exceeds the limit {limit}")]
    SizeLimit { ambient: usize, limit: usize },
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("counit only exists on the diagonal GL_m(e,e)")]
    NotDiagonal,
    #[error("indices must be distinct, got ({0}, {1}, {2})")]
    RepeatedIndex(usize, usize, usize),
    #[error("parameter constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("presentation is not homogeneous")]
    Inhomogeneous,
    #[error("requested degree {requested} but only degree {processed} is fully processed")]
    InsufficientDegree { requested: usize, processed: usize },
    #[error("inconsistent evidence: {0}")]
    InconsistentEvidence(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
