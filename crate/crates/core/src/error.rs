use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("{what} index {index} out of range (limit {limit})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("family size exceeds 2^m+1 (k = {k}, m = {m})")]
    FamilySizeExceeded { k: usize, m: usize },

    #[error("no known construction: {0}")]
    NoKnownConstruction(String),

    #[error("certification failed: {0}")]
    CertificationFailed(String),

    #[error("conditioning event has zero probability")]
    ZeroProbabilityEvent,

    #[error("unsupported prior: only the uniform prior is supported")]
    UnsupportedPrior,

    #[error("POVM completeness violated (max deviation {deviation:e})")]
    PovmIncomplete { deviation: f64 },

    #[error("POVM operator {index} is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    PovmNegative { index: usize, min_eigenvalue: f64 },

    #[error("degenerate POVM operator {index} (trace {trace:e})")]
    DegenerateOperator { index: usize, trace: f64 },

    #[error("invalid GF(2^{m}) element {value}")]
    InvalidFieldElement { m: usize, value: u32 },

    #[error("dimension {0} exceeds the supported maximum")]
    TooLarge(usize),
}
