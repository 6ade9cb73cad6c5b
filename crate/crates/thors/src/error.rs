use std::path::PathBuf;

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] thors_core::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("column `{0}` not found in header")]
    MissingColumn(String),
    #[error("row {row}, column `{column}`: cannot parse `{value}` as a number")]
    UnparseableCell {
        row: usize,
        column: String,
        value: String,
    },
    #[error("label column holds a single class")]
    SingleClassData,
    #[error("config: {0}")]
    Config(String),
    #[error("split: {0}")]
    Split(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl HarnessError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 2 invalid input, 3 unachievable bound, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Core(thors_core::Error::Unachievable(_)) => 3,
            HarnessError::Io { .. } => 4,
            HarnessError::Csv(e) if matches!(e.kind(), csv::ErrorKind::Io(_)) => 4,
            _ => 2,
        }
    }
}
