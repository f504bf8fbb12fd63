use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by ingestion, featurization, clustering and selection.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("no series")]
    NoSeries,

    #[error("row {row}: {reason}")]
    BadRow { row: usize, reason: String },

    #[error("dataset needs at least 2 series, found {0}")]
    TooFewSeries(usize),

    #[error("window exceeds series length (series {series}: window {window} > length {length})")]
    WindowTooLong {
        series: String,
        window: usize,
        length: usize,
    },

    #[error("invalid SAX parameters: {0}")]
    SaxParams(String),

    #[error("all documents are empty")]
    EmptyDocuments,

    #[error("frequency filter removed every vocabulary word")]
    EmptyVocabulary,

    #[error("invalid frequency filter: min_freq {min} must be below max_freq {max}, both within [0, 1]")]
    FrequencyFilter { min: f64, max: f64 },

    #[error("dimension mismatch: row {row} has {found} values, expected {expected}")]
    DimensionMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("raw mode requires equal lengths")]
    UnequalLengths,

    #[error("silhouette undefined for k = {0} (need k >= 2)")]
    SilhouetteUndefined(usize),

    #[error("invalid cluster count k = {k} for n = {n} series")]
    InvalidK { k: usize, n: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid sweep grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed report: {0}")]
    MalformedReport(String),

    #[error("dataset {0} not found")]
    DatasetNotFound(String),

    #[error("empty input")]
    EmptyInput,
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status used by the command-line front end.
    ///
    /// Ingestion and data-shape problems map to 1, configuration and report
    /// format problems map to 2.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SaxParams(_)
            | Error::FrequencyFilter { .. }
            | Error::InvalidGrid(_)
            | Error::Config(_)
            | Error::MalformedReport(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
