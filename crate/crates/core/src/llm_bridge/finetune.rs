//! Fine-tuning export: one chat example per JSONL line with the gold label as
//! the assistant message.

use serde_json::{json, Value};

use super::error::LlmError;
use super::types::Task;

fn system_instruction(task: Task) -> &'static str {
    match task {
        Task::Attention => {
            "You are a data analyst who reviews EEG features and classifies the user state as focused or unfocused."
        }
        Task::SleepStage => {
            "You are a data analyst who reviews EEG features and returns the sleep stage as a number from 0 to 4 (0:wake, 1: stage 1, 2: stage 2, 3: stage 3 or 4, 4: REM)."
        }
        _ => "You are a data analyst who reviews human behavioral data.",
    }
}

/// Serialize labeled feature-text rows as fine-tune JSONL. Ordering follows
/// the input; every line is a standalone JSON chat example with three
/// messages (system, user, assistant = canonical label).
pub fn export_finetune_jsonl(
    rows: &[(String, String)],
    task: Task,
) -> Result<Vec<u8>, LlmError> {
    if rows.is_empty() {
        return Err(LlmError::EmptyInput);
    }
    let mut out = Vec::new();
    for (features, label) in rows {
        let line = json!({
            "messages": [
                {"role": "system", "content": system_instruction(task)},
                {"role": "user", "content": features},
                {"role": "assistant", "content": label},
            ]
        });
        out.extend_from_slice(line.to_string().as_bytes());
        out.push(b'\n');
    }
    Ok(out)
}

/// Recover (features, label) pairs from an export; the round trip is exact.
pub fn parse_finetune_jsonl(bytes: &[u8]) -> Result<Vec<(String, String)>, LlmError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| LlmError::MalformedResponse(format!("export is not UTF-8: {e}")))?;
    let mut out = Vec::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(line)?;
        let messages = value
            .get("messages")
            .and_then(|m| m.as_array())
            .ok_or_else(|| LlmError::MalformedResponse("line lacks messages".into()))?;
        let content = |role: &str| -> Option<String> {
            messages
                .iter()
                .find(|m| m.get("role").and_then(|r| r.as_str()) == Some(role))
                .and_then(|m| m.get("content"))
                .and_then(|c| c.as_str())
                .map(String::from)
        };
        match (content("user"), content("assistant")) {
            (Some(features), Some(label)) => out.push((features, label)),
            _ => {
                return Err(LlmError::MalformedResponse(
                    "line lacks user/assistant messages".into(),
                ))
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_rows_make_three_parseable_lines() {
        let rows = vec![
            ("alpha: 1".to_string(), "focused".to_string()),
            ("alpha: 9".to_string(), "unfocused".to_string()),
            ("alpha: 5".to_string(), "focused".to_string()),
        ];
        let bytes = export_finetune_jsonl(&rows, Task::Attention).unwrap();
        let text = std::str::from_utf8(&bytes).unwrap();
        assert_eq!(text.lines().count(), 3);
        for line in text.lines() {
            let v: Value = serde_json::from_str(line).unwrap();
            assert_eq!(v["messages"].as_array().unwrap().len(), 3);
        }
    }

    #[test]
    fn round_trip_recovers_labels() {
        let rows = vec![
            ("delta: 3.1".to_string(), "0".to_string()),
            ("delta: 0.2".to_string(), "4".to_string()),
        ];
        let bytes = export_finetune_jsonl(&rows, Task::SleepStage).unwrap();
        assert_eq!(parse_finetune_jsonl(&bytes).unwrap(), rows);
    }

    #[test]
    fn empty_input_rejected() {
        assert!(matches!(
            export_finetune_jsonl(&[], Task::Attention),
            Err(LlmError::EmptyInput)
        ));
    }
}
