use thiserror::Error;

/// Errors produced by dataset construction, estimation, and the simulation lab.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value at row {row}, column `{column}`")]
    NonFinite { row: usize, column: String },

    #[error("duplicate column name `{0}`")]
    DuplicateColumn(String),

    #[error("column `{0}` not found")]
    UnknownColumn(String),

    #[error("insufficient observations: need at least {needed}, got {got}")]
    InsufficientObservations { needed: usize, got: usize },

    #[error("degenerate response `{0}`: all sample values are equal")]
    DegenerateResponse(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid covariance: {0}")]
    InvalidCovariance(String),

    #[error("not a covariance model: {0}")]
    NotPsd(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown model id `{0}`")]
    UnknownModel(String),

    #[error("replication {rep} failed: {source}")]
    Replication {
        rep: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn at_replication(self, rep: usize) -> Error {
        Error::Replication {
            rep,
            source: Box::new(self),
        }
    }
}
