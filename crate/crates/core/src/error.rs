use std::path::PathBuf;

use crate::model::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    Invalid(ValidationReport),

    #[error("integration did not converge: t_max = {t_max} reached with amplitude {residual:e} above floor {floor:e}")]
    NonConvergence { t_max: f64, residual: f64, floor: f64 },

    #[error("invalid integration config: {0}")]
    Config(String),

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("grid shapes differ: {0}")]
    ShapeMismatch(String),

    #[error("operation requires a domain symmetric about the origin")]
    AsymmetricDomain,

    #[error("grid has no values")]
    EmptyGrid,

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Parse { path: path.into(), message: message.into() }
    }
}
