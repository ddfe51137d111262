//! LLM prompt harness: zero-shot / in-context prompt construction, fine-tune
//! export, an OpenAI-compatible chat-completions client with retries and
//! bounded parallelism, transcript recording/replay, and structured response
//! parsing with refusal detection.

pub mod client;
mod error;
pub mod finetune;
pub mod parse;
pub mod prompt;
pub mod transcript;
mod types;

pub use client::{chat_complete, request_body, run_bundles};
pub use error::LlmError;
pub use finetune::{export_finetune_jsonl, parse_finetune_jsonl};
pub use parse::{parse_inference, parse_inference_with_patterns, DEFAULT_REFUSAL_PATTERNS};
pub use prompt::{
    build_in_context, build_zero_shot, feature_text, format_significant, ANALYST_SYSTEM,
    NEUROLOGIST_SYSTEM,
};
pub use transcript::{load_transcript, TranscriptRecord, TranscriptReplayer, TranscriptWriter};
pub use types::{
    EndpointConfig, ImageKind, ImagePayload, LlmInference, Payload, PromptBundle, Task, UserPart,
};
