use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("training set has a single class")]
    SingleClassTrain,
    #[error("empty training labels")]
    EmptyTrain,
    #[error("non-finite feature value in epoch {epoch_index}")]
    NonFiniteFeature { epoch_index: usize },
    #[error("feature vector length {actual} does not match model ({expected})")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("predictions ({predictions}) and truth ({truth}) differ in length")]
    LengthMismatch { predictions: usize, truth: usize },
    #[error("label `{0}` not in the class list")]
    UnknownLabel(String),
    #[error("unsupported model format version {0}")]
    UnsupportedModelVersion(u32),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}
