use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("index {index} out of range {lo}..={hi}")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("function and space refer to different meshes")]
    MeshMismatch,

    #[error("series for Mittag-Leffler E_{beta}({z}) {kind}")]
    MittagLeffler {
        beta: f64,
        z: f64,
        kind: &'static str,
    },

    #[error("linear solver stopped after {iterations} iterations with relative residual {residual:.3e}")]
    SolverNotConverged { iterations: usize, residual: f64 },

    #[error("matrix is not positive definite (pivot {pivot:.3e} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("Kirchhoff coefficient {value} outside declared bounds [{m1}, {m2}] at level {level}")]
    CoefficientOutOfBounds {
        level: usize,
        value: f64,
        m1: f64,
        m2: f64,
    },

    #[error("config key `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("{path}: {reason}")]
    Io { path: String, reason: String },

    #[error("time level {level}: {source}")]
    StepFailed {
        level: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }
}
