//! Append-only JSONL transcript of every request and raw response, keyed by
//! the prompt-bundle hash. Evaluation can replay a transcript with no network
//! access.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::error::LlmError;
use super::types::PromptBundle;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TranscriptRecord {
    /// RFC 3339 timestamp of completion.
    pub timestamp: String,
    pub bundle_hash: String,
    pub request_body: Value,
    pub status: u16,
    pub raw_response: String,
}

/// Single-writer transcript sink; records are appended in completion order.
pub struct TranscriptWriter {
    file: Mutex<File>,
}

impl TranscriptWriter {
    pub fn create(path: &Path) -> Result<Self, LlmError> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(Self {
            file: Mutex::new(file),
        })
    }

    pub fn record(
        &self,
        bundle: &PromptBundle,
        request_body: &Value,
        status: u16,
        raw_response: &str,
    ) -> Result<(), LlmError> {
        let record = TranscriptRecord {
            timestamp: chrono::Utc::now().to_rfc3339(),
            bundle_hash: bundle.hash(),
            request_body: request_body.clone(),
            status,
            raw_response: raw_response.to_string(),
        };
        let line = serde_json::to_string(&record)?;
        let mut file = self.file.lock().unwrap();
        writeln!(file, "{line}")?;
        Ok(())
    }
}

pub fn load_transcript(path: &Path) -> Result<Vec<TranscriptRecord>, LlmError> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line)?);
    }
    Ok(out)
}

/// Replay index over a transcript: the latest successful response wins for
/// each bundle hash.
pub struct TranscriptReplayer {
    responses: HashMap<String, String>,
}

impl TranscriptReplayer {
    pub fn from_records(records: &[TranscriptRecord]) -> Self {
        let mut responses = HashMap::new();
        for r in records {
            if (200..300).contains(&r.status) {
                responses.insert(r.bundle_hash.clone(), r.raw_response.clone());
            }
        }
        Self { responses }
    }

    pub fn load(path: &Path) -> Result<Self, LlmError> {
        Ok(Self::from_records(&load_transcript(path)?))
    }

    pub fn len(&self) -> usize {
        self.responses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.responses.is_empty()
    }

    /// The recorded model content for this bundle, if any. Transcripts store
    /// the raw HTTP body; the chat content is extracted the same way as the
    /// live path.
    pub fn content_for(&self, bundle: &PromptBundle) -> Option<String> {
        let raw = self.responses.get(&bundle.hash())?;
        // Stored bodies may be full chat-completion envelopes or bare content.
        if let Ok(v) = serde_json::from_str::<Value>(raw) {
            if let Some(content) = v
                .get("choices")
                .and_then(|c| c.get(0))
                .and_then(|c| c.get("message"))
                .and_then(|m| m.get("content"))
                .and_then(|c| c.as_str())
            {
                return Some(content.to_string());
            }
        }
        Some(raw.clone())
    }
}
