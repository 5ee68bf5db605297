use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("invalid {field}: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("label count {labels} does not match feature rows {rows}")]
    LabelCountMismatch { labels: usize, rows: usize },
    #[error("class {class} has {count} samples, at least 2 required")]
    ClassTooRare { class: u32, count: usize },
    #[error("unknown model_id {0:?}")]
    UnknownModel(String),
    #[error("unknown dataset_id {0:?}")]
    UnknownDataset(String),
    #[error("duplicate {kind} {key:?}")]
    Duplicate { kind: &'static str, key: String },
    #[error("missing {table} entry for model {model:?} on dataset {dataset:?}")]
    MissingEntry {
        table: &'static str,
        model: String,
        dataset: String,
    },
    #[error("model {0:?} is not in the static order")]
    NotInOrder(String),
    #[error("at least 2 models required, got {0}")]
    TooFewModels(usize),
    #[error("at least 2 datasets required for dispersion, got {0}")]
    TooFewDatasets(usize),
    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(&'static str),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("unknown metric id {0:?}")]
    UnknownMetric(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Self::NonFinite { .. } => "non_finite",
            Self::Invalid { .. } => "invalid",
            Self::LabelCountMismatch { .. } => "label_count_mismatch",
            Self::ClassTooRare { .. } => "class_too_rare",
            Self::UnknownModel(_) => "unknown_model",
            Self::UnknownDataset(_) => "unknown_dataset",
            Self::Duplicate { .. } => "duplicate",
            Self::MissingEntry { .. } => "missing_entry",
            Self::NotInOrder(_) => "not_in_order",
            Self::TooFewModels(_) => "too_few_models",
            Self::TooFewDatasets(_) => "too_few_datasets",
            Self::UndefinedCorrelation(_) => "undefined_correlation",
            Self::LengthMismatch(..) => "length_mismatch",
            Self::UnknownMetric(_) => "unknown_metric",
        }
    }
}
