use std::path::PathBuf;

/// Errors produced by dataset ingestion, model files and argument validation.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A CSV row that could not be parsed. `row` counts data rows from 1
    /// (the header line, when present, is row 0).
    #[error("row {row}: {message}")]
    Parse { row: usize, message: String },

    /// A label value with no entry in the user-supplied label mapping.
    #[error("row {row}: label value {value:?} is not covered by the label mapping")]
    UnmappedLabel { row: usize, value: String },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("model file line {line}: {message}")]
    ModelFormat { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
