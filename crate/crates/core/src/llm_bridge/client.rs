//! Blocking chat-completions client for any OpenAI-compatible endpoint, with
//! exponential backoff on 429/5xx and bounded-parallel batch dispatch.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use serde_json::{json, Value};

use super::error::LlmError;
use super::transcript::TranscriptWriter;
use super::types::{EndpointConfig, PromptBundle, UserPart};

/// Render the wire-format request body: model, messages (system + one user
/// message), temperature. Image parts become `image_url` data URIs in order.
pub fn request_body(bundle: &PromptBundle, endpoint: &EndpointConfig) -> Value {
    let mut messages = Vec::new();
    if !bundle.system_text.is_empty() {
        messages.push(json!({"role": "system", "content": bundle.system_text}));
    }
    let has_images = bundle.image_count() > 0;
    if has_images {
        let parts: Vec<Value> = bundle
            .user_parts
            .iter()
            .map(|p| match p {
                UserPart::Text(t) => json!({"type": "text", "text": t}),
                UserPart::Image(img) => json!({
                    "type": "image_url",
                    "image_url": {
                        "url": format!("data:{};base64,{}", img.media_type, img.base64)
                    }
                }),
            })
            .collect();
        messages.push(json!({"role": "user", "content": parts}));
    } else {
        messages.push(json!({"role": "user", "content": bundle.joined_text()}));
    }
    json!({
        "model": endpoint.model_name,
        "messages": messages,
        "temperature": endpoint.temperature,
    })
}

fn api_key(endpoint: &EndpointConfig) -> Result<Option<String>, LlmError> {
    if endpoint.api_key_env_var.is_empty() {
        return Ok(None);
    }
    match std::env::var(&endpoint.api_key_env_var) {
        Ok(v) if !v.is_empty() => Ok(Some(v)),
        _ => Err(LlmError::MissingApiKey(endpoint.api_key_env_var.clone())),
    }
}

fn extract_content(body: &str) -> Result<String, LlmError> {
    let value: Value = serde_json::from_str(body)
        .map_err(|e| LlmError::MalformedResponse(format!("response is not JSON: {e}")))?;
    value
        .get("choices")
        .and_then(|c| c.get(0))
        .and_then(|c| c.get("message"))
        .and_then(|m| m.get("content"))
        .and_then(|c| c.as_str())
        .map(|s| s.to_string())
        .ok_or_else(|| LlmError::MalformedResponse("missing choices[0].message.content".into()))
}

/// POST one bundle and return the first choice's message content. Retries
/// with exponential backoff on 429 and 5xx up to `max_retries`; 401/403 fail
/// immediately.
pub fn chat_complete(
    bundle: &PromptBundle,
    endpoint: &EndpointConfig,
    transcript: Option<&TranscriptWriter>,
) -> Result<String, LlmError> {
    let client = reqwest::blocking::Client::builder()
        .timeout(Duration::from_secs(endpoint.timeout_s))
        .build()
        .map_err(|e| LlmError::Network(e.to_string()))?;
    chat_complete_with(&client, bundle, endpoint, transcript)
}

fn chat_complete_with(
    client: &reqwest::blocking::Client,
    bundle: &PromptBundle,
    endpoint: &EndpointConfig,
    transcript: Option<&TranscriptWriter>,
) -> Result<String, LlmError> {
    let key = api_key(endpoint)?;
    let body = request_body(bundle, endpoint);
    let url = format!(
        "{}/v1/chat/completions",
        endpoint.base_url.trim_end_matches('/')
    );

    let mut attempts = 0u32;
    loop {
        attempts += 1;
        let mut req = client.post(&url).json(&body);
        if let Some(k) = &key {
            req = req.header("authorization", format!("Bearer {k}"));
        }
        let result = req.send();
        match result {
            Err(e) if e.is_timeout() => {
                if attempts > endpoint.max_retries {
                    return Err(LlmError::Timeout);
                }
            }
            Err(e) => return Err(LlmError::Network(e.to_string())),
            Ok(resp) => {
                let status = resp.status().as_u16();
                let text = resp.text().map_err(|e| LlmError::Network(e.to_string()))?;
                if let Some(t) = transcript {
                    t.record(bundle, &body, status, &text)?;
                }
                match status {
                    200..=299 => return extract_content(&text),
                    401 | 403 => return Err(LlmError::AuthError(status)),
                    429 | 500..=599 => {
                        if attempts > endpoint.max_retries {
                            return if status == 429 {
                                Err(LlmError::RateLimited { attempts })
                            } else {
                                Err(LlmError::HttpStatus { status, body: text })
                            };
                        }
                    }
                    _ => return Err(LlmError::HttpStatus { status, body: text }),
                }
            }
        }
        let delay = endpoint.retry_base_ms.saturating_mul(1u64 << (attempts - 1).min(8));
        std::thread::sleep(Duration::from_millis(delay));
    }
}

/// Dispatch a batch with at most `max_parallel` requests in flight. Results
/// keep the input order; the transcript writer is the only serialized
/// resource (records land in completion order).
pub fn run_bundles(
    bundles: &[PromptBundle],
    endpoint: &EndpointConfig,
    transcript: Option<&TranscriptWriter>,
) -> Vec<Result<String, LlmError>> {
    let n = bundles.len();
    let workers = endpoint.max_parallel.max(1).min(n.max(1));
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<String, LlmError>>>> =
        Mutex::new((0..n).map(|_| None).collect());

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| {
                let client = reqwest::blocking::Client::builder()
                    .timeout(Duration::from_secs(endpoint.timeout_s))
                    .build()
                    .expect("http client");
                loop {
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    if i >= n {
                        break;
                    }
                    let out = chat_complete_with(&client, &bundles[i], endpoint, transcript);
                    results.lock().unwrap()[i] = Some(out);
                }
            });
        }
    });

    results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every slot filled"))
        .collect()
}
