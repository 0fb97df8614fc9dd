use std::path::PathBuf;

/// Errors raised by clustval operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid pair ({i}, {j}) for {n} objects: requires i < j < n")]
    InvalidPair { i: usize, j: usize, n: usize },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("co-membership vector has a single class ({positives} positive pairs of {total})")]
    DegenerateLabels { positives: usize, total: usize },

    #[error("similarity values must be finite")]
    NonFiniteSimilarity,

    #[error("index `{index}` is undefined: {reason}")]
    UndefinedScore { index: &'static str, reason: &'static str },

    #[error("gamma is undefined: every within/between comparison is tied")]
    UndefinedGamma,

    #[error("adjusted Rand index is undefined: expected and maximum index coincide")]
    UndefinedAri,

    #[error("correlation is undefined: {0}")]
    UndefinedCorrelation(&'static str),

    #[error("invalid number of clusters k={k} for n={n}: requires 2 <= k <= n-1")]
    InvalidK { k: usize, n: usize },

    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),

    #[error("synthetic generation failed: {0}")]
    GenerationFailed(String),

    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("{missing} missing cells in the compared block; filter datasets or CVIs with missing correlations first")]
    IncompleteBlock { missing: usize },

    #[error("unknown stratum `{0}`")]
    UnknownStratum(String),

    #[error("unknown index id `{given}`; valid ids: {valid}")]
    UnknownIndex { given: String, valid: String },

    #[error("unknown algorithm tag `{0}`; valid tags: kmeans, single, average, complete, ward")]
    UnknownAlgorithm(String),

    #[error("unsupported significance level {0}; supported: 0.05, 0.10")]
    UnsupportedAlpha(f64),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by numerically degenerate inputs rather than
    /// malformed data or arguments.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::DegenerateLabels { .. }
                | Error::UndefinedScore { .. }
                | Error::UndefinedGamma
                | Error::UndefinedAri
                | Error::UndefinedCorrelation(_)
                | Error::IncompleteBlock { .. }
                | Error::GenerationFailed(_)
        )
    }

    /// True for errors caused by an invalid request (unknown ids, out-of-range
    /// parameters) rather than by the data.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::UnknownIndex { .. }
                | Error::UnknownAlgorithm(_)
                | Error::UnknownStratum(_)
                | Error::UnsupportedAlpha(_)
                | Error::InvalidK { .. }
                | Error::InvalidConfig(_)
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
