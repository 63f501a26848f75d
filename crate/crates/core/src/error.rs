use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite value at node ({i}, {j})")]
    NonFinite { i: usize, j: usize },

    #[error("pivot {pivot:e} at row {row} is below the singularity threshold")]
    SingularPivot { row: usize, pivot: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("nodes {0} and {1} coincide")]
    RepeatedNode(usize, usize),

    #[error("singular {axis}-boundary closure (determinant {det:e})")]
    SingularBoundary { axis: char, det: f64 },

    #[error("non-finite state after stage {stage} of the step starting at t={t}")]
    Unstable { t: f64, stage: usize },

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("line {line}: {msg}")]
    ConfigSyntax { line: usize, msg: String },

    #[error("invalid value for `{key}`: {msg}")]
    InvalidParameter { key: String, msg: String },

    #[error("{0} already exists (use overwrite to replace it)")]
    WouldOverwrite(std::path::PathBuf),

    #[error("malformed snapshot: {0}")]
    MalformedSnapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(key: &str, msg: impl Into<String>) -> Self {
        Error::InvalidParameter {
            key: key.to_string(),
            msg: msg.into(),
        }
    }
}
