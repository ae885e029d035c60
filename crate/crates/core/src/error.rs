use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("value exceeds the binary64 range")]
    FloatOverflow,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("quadratic space must have positive dimension")]
    EmptySpace,
    #[error("Gram matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("Gram matrix is singular")]
    SingularGram,
    #[error("vector is isotropic (Q(v) = 0)")]
    IsotropicVector,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("isometry check failed: {0}")]
    UnverifiedIsometry(String),
    #[error("expression has degree {degree}, above the supported maximum {max}")]
    DegreeTooHigh { degree: usize, max: usize },
    #[error("polynomial is not a homogeneous cubic")]
    NotCubic,
    #[error("conflicting trilinear values for index {0:?}")]
    ConflictingEntry([usize; 3]),
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("basepoint check failed: {0}")]
    NotBasepoint(String),
    #[error("trace form T is degenerate")]
    DegenerateTraceForm,
    #[error("structure constants are not commutative at ({i}, {j})")]
    NotCommutative { i: usize, j: usize },
    #[error("triple does not satisfy the eiconal equation ({0} nonzero coefficients)")]
    NotEiconal(usize),
    #[error("pushed-forward cubic does not match the target cubic")]
    CubicMismatch,
    #[error("morphism verification failed: {0}")]
    MorphismFailed(String),
    #[error("round trip failed: {0}")]
    RoundTripFailed(String),
    #[error("unknown catalog family {0:?}; valid names: cartan:1|2|4|8, spin:n, diagonal, herm3:1|2|4, spinfactor[:n]")]
    InvalidFamily(String),
    #[error("division algebra dimension must be one of 1, 2, 4, 8 (got {0})")]
    InvalidDivisionDim(usize),
    #[error("parse error: {0}")]
    Parse(String),
}
