use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("malformed EDF header: {0}")]
    MalformedHeader(String),
    #[error("record payload length mismatch: expected {expected} bytes, found {actual}")]
    InconsistentRecord { expected: usize, actual: usize },
    #[error("signal `{signal}` has digital min == digital max, cannot calibrate")]
    ZeroDigitalRange { signal: String },
    #[error("unknown annotation label `{0}`")]
    UnknownLabel(String),
    #[error("annotations overlap at {onset_s} s")]
    OverlappingAnnotations { onset_s: f64 },
    #[error("column `{0}` missing from CSV header")]
    MissingColumn(String),
    #[error("non-numeric cell at row {row}, column `{column}`: {value:?}")]
    NonNumericCell {
        row: usize,
        column: String,
        value: String,
    },
    #[error("invalid activity code {code} at row {row} (expected 0-3)")]
    InvalidActivityCode { row: usize, code: i64 },
    #[error("activity timestamps not strictly increasing at row {row}")]
    NonMonotonicTimestamps { row: usize },
    #[error("epoch window {length_s} s x {sample_rate_hz} Hz is not an integer sample count")]
    NonIntegerWindow { length_s: f64, sample_rate_hz: f64 },
    #[error("no annotation covers epoch midpoint at {midpoint_s} s")]
    NoAnnotationCoverage { midpoint_s: f64 },
    #[error("split spec needs {requested} epochs but only {available} are available")]
    InsufficientEpochs { requested: usize, available: usize },
    #[error("unknown attention label {0:?}")]
    UnknownAttentionLabel(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}
