use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} out of range 1..={dim} in entry {tuple:?}")]
    IndexOutOfRange {
        tuple: Vec<usize>,
        index: usize,
        dim: usize,
    },
    #[error("duplicate entry for index tuple {0:?}")]
    DuplicateEntry(Vec<usize>),
    #[error("index tuple {tuple:?} has {found} indices, expected {expected}")]
    ArityMismatch {
        tuple: Vec<usize>,
        expected: usize,
        found: usize,
    },
    #[error("order_half and dim must be positive (got m={m}, n={n})")]
    EmptyShape { m: usize, n: usize },
    #[error("vector length {found} does not match tensor dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("tensor is not Hermitian")]
    NotHermitian,
    #[error("vector is zero")]
    ZeroVector,
    #[error("no solver start converged ({starts} starts)")]
    ConvergenceFailure { starts: usize },
    #[error("tensor has order {order}, expected a matrix (order 2)")]
    NotMatrix { order: usize },
    #[error("inclusion set needs dim >= 2 (got {0})")]
    DimensionTooSmall(usize),
    #[error("diagonal entry {index} is not real: {re} + {im}i")]
    NonRealDiagonal { index: usize, re: f64, im: f64 },
    #[error("split index {s} must satisfy 1 <= s < {n}")]
    BadSplit { s: usize, n: usize },
    #[error("block bound {name} = {value} must be positive")]
    NonpositiveBound { name: &'static str, value: f64 },
    #[error("curvature coefficients violate conjugate symmetry at [{i}][{k}][{j}][{l}]")]
    SymmetryViolation { i: usize, k: usize, j: usize, l: usize },
    #[error("metric is not Hermitian positive definite: {0}")]
    InvalidMetric(String),
    #[error("shape mismatch in {block}: expected {expected} values, found {found}")]
    ShapeMismatch {
        block: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("assembled G tensor is not Hermitian; component symmetries are inconsistent")]
    NotHermitianAfterAssembly,
    #[error("no lambda threshold found: {0}")]
    NoThresholdFound(String),
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name, used in CLI error reports and by the C ABI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::DuplicateEntry(_) => "DuplicateEntry",
            Error::ArityMismatch { .. } => "ArityMismatch",
            Error::EmptyShape { .. } => "EmptyShape",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotHermitian => "NotHermitian",
            Error::ZeroVector => "ZeroVector",
            Error::ConvergenceFailure { .. } => "ConvergenceFailure",
            Error::NotMatrix { .. } => "NotMatrix",
            Error::DimensionTooSmall(_) => "DimensionTooSmall",
            Error::NonRealDiagonal { .. } => "NonRealDiagonal",
            Error::BadSplit { .. } => "BadSplit",
            Error::NonpositiveBound { .. } => "NonpositiveBound",
            Error::SymmetryViolation { .. } => "SymmetryViolation",
            Error::InvalidMetric(_) => "InvalidMetric",
            Error::ShapeMismatch { .. } => "ShapeMismatch",
            Error::NotHermitianAfterAssembly => "NotHermitianAfterAssembly",
            Error::NoThresholdFound(_) => "NoThresholdFound",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
