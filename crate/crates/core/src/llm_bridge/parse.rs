//! Structured-inference parsing: pull the first JSON object out of a model
//! response (tolerating code fences and surrounding prose), map label
//! synonyms onto canonical classes, clamp confidence, and detect refusals.

use serde_json::Value;

use super::types::{LlmInference, Task};

/// Refusal phrases observed in model output; matching is case-insensitive
/// substring search. Extend via [`parse_inference_with_patterns`].
pub const DEFAULT_REFUSAL_PATTERNS: [&str; 7] = [
    "cannot assist",
    "can't assist",
    "unable to assist",
    "do not have the capability",
    "i'm unable",
    "i am unable",
    "requires machine learning models",
];

/// Scan for the first balanced `{...}` region that parses as JSON.
fn extract_first_json(raw: &str) -> Option<Value> {
    let bytes = raw.as_bytes();
    let mut search_from = 0;
    while let Some(offset) = raw[search_from..].find('{') {
        let start = search_from + offset;
        let mut depth = 0usize;
        let mut in_string = false;
        let mut escaped = false;
        for (i, &b) in bytes.iter().enumerate().skip(start) {
            if escaped {
                escaped = false;
                continue;
            }
            match b {
                b'\\' if in_string => escaped = true,
                b'"' => in_string = !in_string,
                b'{' if !in_string => depth += 1,
                b'}' if !in_string => {
                    depth -= 1;
                    if depth == 0 {
                        if let Ok(v) = serde_json::from_str::<Value>(&raw[start..=i]) {
                            return Some(v);
                        }
                        break;
                    }
                }
                _ => {}
            }
        }
        search_from = start + 1;
    }
    None
}

fn normalize_key(key: &str) -> String {
    key.chars()
        .filter(|c| c.is_ascii_alphanumeric())
        .collect::<String>()
        .to_ascii_lowercase()
}

fn lookup<'a>(obj: &'a serde_json::Map<String, Value>, candidates: &[&str]) -> Option<&'a Value> {
    for cand in candidates {
        let want = normalize_key(cand);
        for (k, v) in obj {
            if normalize_key(k) == want {
                return Some(v);
            }
        }
    }
    None
}

/// Map a raw label value onto the task's canonical class string.
fn canonical_label(task: Task, value: &Value) -> Option<String> {
    let text = match value {
        Value::String(s) => s.trim().to_ascii_lowercase(),
        Value::Number(n) => n.to_string(),
        _ => return None,
    };
    match task {
        Task::Attention => match text.as_str() {
            "focused" | "focus" => Some("focused".into()),
            "unfocused" | "unfocussed" | "unfocus" | "drowsy" | "unfocused/drowsy" => {
                Some("unfocused".into())
            }
            _ => None,
        },
        Task::SleepStage => {
            let had_stage_prefix = text.starts_with("stage");
            let t = text.trim_start_matches("stage").trim();
            match t {
                "0" | "w" | "wake" | "wake state" | "awake" => Some("0"),
                "1" | "n1" => Some("1"),
                "2" | "n2" => Some("2"),
                "3" | "3&4" | "3 & 4" | "3 or 4" | "sws" | "slow wave sleep" => Some("3"),
                // "stage 4" merges into 3&4; a bare numeric 4 is the REM code.
                "4" => Some(if had_stage_prefix { "3" } else { "4" }),
                "rem" | "r" | "rem sleep" => Some("4"),
                "5" | "unknown" | "movement" | "unknown or movement" => Some("5"),
                _ => None,
            }
            .map(String::from)
        }
        Task::SleepQualityPsqi | Task::SleepQualityActivity => {
            if text.contains("good") {
                Some("good".into())
            } else if text.contains("poor") || text.contains("bad") {
                Some("poor".into())
            } else {
                None
            }
        }
        Task::Suggestion | Task::GuidedImagery => None,
    }
}

fn extract_confidence(value: &Value) -> Option<u8> {
    let number = match value {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => s.trim().trim_end_matches('%').trim().parse::<f64>().ok(),
        _ => None,
    }?;
    Some(number.round().clamp(0.0, 100.0) as u8)
}

const LABEL_KEYS: [&str; 12] = [
    "state",
    "user_state",
    "attention_state",
    "stage",
    "sleep_stage",
    "estimated_sleep_stage",
    "sleep_quality",
    "estimated_sleep_quality",
    "quality",
    "label",
    "classification",
    "answer",
];

const CONFIDENCE_KEYS: [&str; 4] = [
    "confidence",
    "confidence_level",
    "confident_level",
    "confidence_0_100",
];

const EXPLANATION_KEYS: [&str; 5] = [
    "explanation",
    "explanations",
    "reasoning",
    "rationale",
    "description",
];

/// Parse a raw response with the default refusal pattern list.
pub fn parse_inference(raw: &str, task: Task) -> LlmInference {
    let patterns: Vec<String> = DEFAULT_REFUSAL_PATTERNS
        .iter()
        .map(|s| s.to_string())
        .collect();
    parse_inference_with_patterns(raw, task, &patterns)
}

/// Parse with a configurable refusal pattern list. A refusal is flagged only
/// when no JSON label was found AND the text matches a pattern; unparseable
/// non-refusal text yields `label = None, refusal = false, unparseable = true`.
pub fn parse_inference_with_patterns(
    raw: &str,
    task: Task,
    refusal_patterns: &[String],
) -> LlmInference {
    let mut label = None;
    let mut confidence = None;
    let mut explanation = String::new();

    if let Some(Value::Object(obj)) = extract_first_json(raw) {
        if let Some(v) = lookup(&obj, &LABEL_KEYS) {
            label = canonical_label(task, v);
        }
        if let Some(v) = lookup(&obj, &CONFIDENCE_KEYS) {
            confidence = extract_confidence(v);
        }
        if let Some(v) = lookup(&obj, &EXPLANATION_KEYS) {
            explanation = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
        }
    }

    let refusal = label.is_none() && {
        let lower = raw.to_ascii_lowercase();
        refusal_patterns
            .iter()
            .any(|p| lower.contains(&p.to_ascii_lowercase()))
    };
    let unparseable = label.is_none() && !refusal;

    LlmInference {
        label,
        confidence,
        explanation,
        refusal,
        unparseable,
        raw: raw.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_json_attention() {
        let inf = parse_inference(
            r#"{"state":"unfocused","confidence":100,"explanation":"alpha/delta ratio is high"}"#,
            Task::Attention,
        );
        assert_eq!(inf.label.as_deref(), Some("unfocused"));
        assert_eq!(inf.confidence, Some(100));
        assert_eq!(inf.explanation, "alpha/delta ratio is high");
        assert!(!inf.refusal);
        assert!(!inf.unparseable);
    }

    #[test]
    fn verbatim_refusal_detected() {
        let inf = parse_inference(
            "As a text-based AI, I do not have the capability to process images and I cannot assist with this request",
            Task::Attention,
        );
        assert!(inf.refusal);
        assert_eq!(inf.label, None);
        assert!(!inf.unparseable);
    }

    #[test]
    fn fenced_json_sleep_stage() {
        let inf = parse_inference(
            "```json\n{\"stage\": 3, \"confidence\": 80}\n```",
            Task::SleepStage,
        );
        assert_eq!(inf.label.as_deref(), Some("3"));
        assert_eq!(inf.confidence, Some(80));
    }

    #[test]
    fn prose_before_json_tolerated() {
        let inf = parse_inference(
            "Sure! Here is my assessment in JSON format:\n{\"sleep_quality\": \"Good\", \"confidence\": \"85%\", \"explanations\": \"regular schedule\"}",
            Task::SleepQualityPsqi,
        );
        assert_eq!(inf.label.as_deref(), Some("good"));
        assert_eq!(inf.confidence, Some(85));
        assert_eq!(inf.explanation, "regular schedule");
    }

    #[test]
    fn stage_synonyms_map_to_codes() {
        let cases = [
            ("\"wake\"", "0"),
            ("\"W\"", "0"),
            ("1", "1"),
            ("\"stage 2\"", "2"),
            ("\"stage 3\"", "3"),
            ("\"stage 4\"", "3"),
            ("\"3 or 4\"", "3"),
            ("\"REM\"", "4"),
            ("4", "4"),
            ("\"movement\"", "5"),
        ];
        for (value, expected) in cases {
            let raw = format!("{{\"stage\": {value}}}");
            let inf = parse_inference(&raw, Task::SleepStage);
            assert_eq!(inf.label.as_deref(), Some(expected), "value {value}");
        }
    }

    #[test]
    fn drowsy_merges_into_unfocused() {
        let inf = parse_inference(r#"{"state": "drowsy"}"#, Task::Attention);
        assert_eq!(inf.label.as_deref(), Some("unfocused"));
    }

    #[test]
    fn confidence_clamped() {
        let inf = parse_inference(r#"{"state":"focused","confidence":250}"#, Task::Attention);
        assert_eq!(inf.confidence, Some(100));
    }

    #[test]
    fn unparseable_non_refusal_flagged() {
        let inf = parse_inference("The weather is lovely today.", Task::Attention);
        assert!(!inf.refusal);
        assert!(inf.unparseable);
        assert_eq!(inf.label, None);
    }

    #[test]
    fn json_label_wins_over_refusal_phrase() {
        // Refusal only fires when no JSON label is present.
        let inf = parse_inference(
            r#"I cannot assist beyond this: {"state":"focused","confidence":60}"#,
            Task::Attention,
        );
        assert_eq!(inf.label.as_deref(), Some("focused"));
        assert!(!inf.refusal);
    }

    #[test]
    fn braces_inside_strings_handled() {
        let inf = parse_inference(
            r#"{"state":"focused","explanation":"shape like { this } appears"}"#,
            Task::Attention,
        );
        assert_eq!(inf.label.as_deref(), Some("focused"));
        assert!(inf.explanation.contains("{ this }"));
    }

    #[test]
    fn serialize_round_trip_identity() {
        for (task, label) in [
            (Task::Attention, "unfocused"),
            (Task::SleepStage, "3"),
            (Task::SleepQualityPsqi, "poor"),
        ] {
            let original = LlmInference {
                label: Some(label.to_string()),
                confidence: Some(85),
                explanation: "because".into(),
                refusal: false,
                unparseable: false,
                raw: String::new(),
            };
            let parsed = parse_inference(&original.serialize(), task);
            assert_eq!(parsed.label, original.label);
            assert_eq!(parsed.confidence, original.confidence);
            assert_eq!(parsed.explanation, original.explanation);
            assert_eq!(parsed.refusal, original.refusal);
        }
    }
}
