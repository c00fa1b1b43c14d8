use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex index {index} out of range for order {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("arc ({i}, {j}) has weight {weight}, expected a value in [0, 1]")]
    InvalidWeight { i: usize, j: usize, weight: f64 },

    #[error("loop arc at vertex {0}")]
    LoopArc(usize),

    #[error("duplicate arc ({0}, {1})")]
    DuplicateArc(usize, usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("eigenvalue iteration did not converge")]
    ConvergenceFailure,

    #[error("order {n} is below the minimum of {min}")]
    OrderTooSmall { n: usize, min: usize },

    #[error("digraph is not balanced")]
    NotBalanced,

    #[error("invalid convex coefficients: {0}")]
    InvalidCoefficients(String),

    #[error("empty input")]
    EmptyInput,

    #[error("spectra have different cardinalities ({0} vs {1})")]
    CardinalityMismatch(usize, usize),

    #[error("invalid restrictor: {0}")]
    InvalidRestrictor(String),

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("order {n} is not supported for filter '{filter}' (max {max})")]
    OrderUnsupported {
        n: usize,
        filter: &'static str,
        max: usize,
    },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("vectors are not orthonormal with zero mean: {0}")]
    NotOrthonormal(String),

    #[error("records have mixed orders")]
    MixedOrders,

    #[error("invalid arc code '{0}'")]
    InvalidCode(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
