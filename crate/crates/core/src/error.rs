use std::path::PathBuf;

/// Errors surfaced by the analysis pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Bad manifest, config file, or unreadable project root. Aborts a run.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("project `{project}` has no production code after exclusions")]
    NoProductionCode { project: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed fact file {path}, line {line}: {message}")]
    Facts { path: PathBuf, line: usize, message: String },

    #[error(transparent)]
    Stats(#[from] csi_stats::StatsError),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
