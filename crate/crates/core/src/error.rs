use std::path::PathBuf;

/// Errors raised anywhere in the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("invalid structured-noise group count {groups} (must be >= 2 and differ from {n_classes} classes)")]
    InvalidGroups { groups: usize, n_classes: usize },

    #[error("degenerate split: {0}")]
    DegenerateSplit(String),

    #[error("invalid k = {k} for {n} samples")]
    InvalidK { k: usize, n: usize },

    #[error("silhouette needs at least two distinct clusters")]
    SingleClusterInput,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("random forest fit requires at least two classes")]
    SingleClassFit,

    #[error("empty input")]
    EmptyInput,

    #[error("feature subset selects no features")]
    EmptySubset,

    #[error("degenerate clustering: {0}")]
    DegenerateClustering(String),

    #[error("objective value out of range: {0}")]
    ObjectiveOutOfRange(String),

    #[error("evaluation budget exceeded: {used} > {budget}")]
    BudgetExceeded { used: usize, budget: usize },

    #[error("too few records: {have} distinct subsets for {want} clusters")]
    TooFewRecords { have: usize, want: usize },

    #[error("schema mismatch in {path}: {reason}")]
    SchemaMismatch { path: PathBuf, reason: String },

    #[error("missing {what}: {path}")]
    Missing { what: &'static str, path: PathBuf },

    #[error("invalid flag combination: {0}")]
    InvalidFlags(String),

    #[error("injected failure: {0}")]
    Injected(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn schema(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        Error::SchemaMismatch {
            path: path.into(),
            reason: reason.into(),
        }
    }
}
