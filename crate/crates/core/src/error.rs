use std::path::PathBuf;

/// Errors produced by the solver library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("function and mesh do not match: {0}")]
    MeshMismatch(String),

    #[error("meshes are not related by refinement: {0}")]
    NotARefinement(String),

    /// A pivot fell below the relative threshold during factorization; the
    /// linearized operator is (numerically) not invertible.
    #[error("singular linear system: pivot {pivot:e} at row {row} (threshold {threshold:e})")]
    SingularSystem {
        row: usize,
        pivot: f64,
        threshold: f64,
    },

    /// The nonlinearity or its derivative produced a non-finite value while
    /// assembling a linear system.
    #[error("non-finite data in linear system: {0}")]
    NonFinite(String),

    #[error("unknown problem `{0}` (expected bratu, gl or fisher:ALPHA:BETA)")]
    UnknownProblem(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
