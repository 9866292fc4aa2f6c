use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("matrix is not symmetric: max |a_ij - a_ji| = {0:e}")]
    Asymmetric(f64),

    #[error("matrix {index} is not traceless: trace = {trace:e}")]
    NotTraceless { index: usize, trace: f64 },

    #[error("matrix is not orthogonal: max |O^T O - I| = {0:e}")]
    NotOrthogonal(f64),

    #[error("tuple is zero and cannot be normalized")]
    ZeroTuple,

    #[error("non-finite value in input")]
    NonFinite,

    #[error("lagrangian frame requires m == n (n = {n}, m = {m})")]
    NotLagrangianFrame { n: usize, m: usize },

    #[error("shape operators fail the lagrangian symmetry <h(X,Y),JZ> = <h(X,Z),JY> (max deviation {0:e})")]
    LagrangianSymmetry(f64),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("missing parameter `{0}`")]
    MissingParam(&'static str),

    #[error("{0}")]
    InvalidConfig(String),

    #[error("invalid input document: {0}")]
    InvalidDocument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
