use serde::{Deserialize, Serialize};

/// Detection or generation task a prompt is built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Attention,
    SleepStage,
    SleepQualityPsqi,
    SleepQualityActivity,
    Suggestion,
    GuidedImagery,
}

impl Task {
    /// Response fields the template asks the model to return.
    pub fn expected_schema(self) -> Vec<String> {
        let fields: &[&str] = match self {
            Task::Attention => &["state", "confidence", "explanation"],
            Task::SleepStage => &["stage", "confidence", "explanation"],
            Task::SleepQualityPsqi | Task::SleepQualityActivity => {
                &["sleep_quality", "confidence", "explanation", "suggestions"]
            }
            Task::Suggestion => &["suggestions"],
            Task::GuidedImagery => &["script"],
        };
        fields.iter().map(|s| s.to_string()).collect()
    }
}

/// What kind of plot an image payload shows; selects the axis wording in the
/// templates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImageKind {
    Waveform,
    Spectrogram,
    Actogram,
    AvgActivity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImagePayload {
    pub media_type: String,
    pub base64: String,
}

impl ImagePayload {
    pub fn png(bytes: &[u8]) -> Self {
        use base64::Engine;
        Self {
            media_type: "image/png".into(),
            base64: base64::engine::general_purpose::STANDARD.encode(bytes),
        }
    }
}

/// Input handed to a prompt builder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Payload {
    FeatureText(String),
    Image(ImageKind, ImagePayload),
    PsqiText(String),
}

/// One ordered user-message part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UserPart {
    Text(String),
    Image(ImagePayload),
}

/// A fully rendered prompt: system text plus ordered user parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptBundle {
    pub system_text: String,
    pub user_parts: Vec<UserPart>,
    pub task: Task,
    pub expected_schema: Vec<String>,
}

impl PromptBundle {
    pub fn new(system_text: impl Into<String>, task: Task) -> Self {
        Self {
            system_text: system_text.into(),
            user_parts: Vec::new(),
            task,
            expected_schema: task.expected_schema(),
        }
    }

    pub fn push_text(&mut self, text: impl Into<String>) {
        self.user_parts.push(UserPart::Text(text.into()));
    }

    pub fn push_image(&mut self, image: ImagePayload) {
        self.user_parts.push(UserPart::Image(image));
    }

    pub fn image_count(&self) -> usize {
        self.user_parts
            .iter()
            .filter(|p| matches!(p, UserPart::Image(_)))
            .count()
    }

    /// Concatenated text parts, for content assertions and serialization.
    pub fn joined_text(&self) -> String {
        self.user_parts
            .iter()
            .filter_map(|p| match p {
                UserPart::Text(t) => Some(t.as_str()),
                UserPart::Image(_) => None,
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// Canonical serialization; identical inputs produce identical bytes.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("prompt bundle serializes")
    }

    /// Hash used to key transcript records for replay.
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut hasher = Sha256::new();
        hasher.update(self.canonical_json().as_bytes());
        hex_string(&hasher.finalize())
    }
}

pub(crate) fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Connection settings for an OpenAI-compatible chat-completions endpoint.
/// The API key is read from the named environment variable and never stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointConfig {
    pub base_url: String,
    pub model_name: String,
    pub api_key_env_var: String,
    pub max_parallel: usize,
    pub timeout_s: u64,
    pub max_retries: u32,
    pub temperature: f64,
    /// Base delay for exponential backoff on 429/5xx.
    #[serde(default = "default_retry_base_ms")]
    pub retry_base_ms: u64,
}

fn default_retry_base_ms() -> u64 {
    500
}

impl Default for EndpointConfig {
    fn default() -> Self {
        Self {
            base_url: "http://127.0.0.1:8080".into(),
            model_name: "gpt-4".into(),
            api_key_env_var: String::new(),
            max_parallel: 4,
            timeout_s: 60,
            max_retries: 3,
            temperature: 0.0,
            retry_base_ms: default_retry_base_ms(),
        }
    }
}

/// A parsed model response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LlmInference {
    /// Canonical task label, when one could be extracted.
    pub label: Option<String>,
    /// 0-100, when stated.
    pub confidence: Option<u8>,
    pub explanation: String,
    /// The model declined the task; mutually exclusive with `label`.
    pub refusal: bool,
    /// No label found and no refusal pattern matched.
    pub unparseable: bool,
    pub raw: String,
}

impl LlmInference {
    pub fn outcome(&self) -> crate::classify::Outcome {
        match (&self.label, self.refusal) {
            (Some(l), _) => crate::classify::Outcome::Label(l.clone()),
            (None, true) => crate::classify::Outcome::Refusal,
            (None, false) => crate::classify::Outcome::Unparseable,
        }
    }

    /// Well-formed JSON rendering; `parse_inference` recovers the inference.
    pub fn serialize(&self) -> String {
        let mut obj = serde_json::Map::new();
        if let Some(label) = &self.label {
            obj.insert("label".into(), serde_json::Value::String(label.clone()));
        }
        if let Some(c) = self.confidence {
            obj.insert("confidence".into(), serde_json::Value::from(c));
        }
        obj.insert(
            "explanation".into(),
            serde_json::Value::String(self.explanation.clone()),
        );
        serde_json::Value::Object(obj).to_string()
    }
}
