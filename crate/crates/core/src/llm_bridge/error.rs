use thiserror::Error;

#[derive(Debug, Error)]
pub enum LlmError {
    #[error("payload kind not valid for task {task:?}")]
    PayloadKindMismatch { task: crate::llm_bridge::Task },
    #[error("expected {expected} in-context examples, got {actual}")]
    WrongExampleCount { expected: usize, actual: usize },
    #[error("duplicate stage example for label `{0}`")]
    DuplicateStageExample(String),
    #[error("stage examples must be ordered W, 1, 2, 3&4, REM")]
    StageExamplesOutOfOrder,
    #[error("empty input")]
    EmptyInput,
    #[error("authentication failed (HTTP {0})")]
    AuthError(u16),
    #[error("rate limited after {attempts} attempts")]
    RateLimited { attempts: u32 },
    #[error("request timed out")]
    Timeout,
    #[error("malformed response: {0}")]
    MalformedResponse(String),
    #[error("HTTP {status}: {body}")]
    HttpStatus { status: u16, body: String },
    #[error("API key environment variable `{0}` is not set")]
    MissingApiKey(String),
    #[error("network error: {0}")]
    Network(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}
