use std::path::Path;

use serde::{Deserialize, Serialize};

use super::FeedbackError;
use crate::dsp::FeatureVector;
use crate::llm_bridge::ImagePayload;
use crate::psqi::PsqiResponse;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Preferences {
    #[serde(default)]
    pub environments: Vec<String>,
    #[serde(default)]
    pub animals: Vec<String>,
    #[serde(default)]
    pub hobbies: Vec<String>,
}

impl Preferences {
    pub fn is_empty(&self) -> bool {
        self.environments.is_empty() && self.animals.is_empty() && self.hobbies.is_empty()
    }
}

/// Everything the feedback prompts can condition on. Profiles are ingested
/// from a JSON document with these field names; `actogram` may be given as a
/// path, resolved to PNG bytes at load time.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct UserProfile {
    #[serde(default)]
    pub gender: Option<String>,
    #[serde(default)]
    pub age_group: Option<String>,
    #[serde(default)]
    pub ethnicity: Option<String>,
    #[serde(default)]
    pub health_issues: Vec<String>,
    #[serde(default)]
    pub preferences: Preferences,
    #[serde(default)]
    pub psqi: Option<PsqiResponse>,
    #[serde(skip)]
    pub actogram: Option<ImagePayload>,
    #[serde(default)]
    pub eeg_features: Option<FeatureVector>,
}

impl UserProfile {
    pub fn is_empty(&self) -> bool {
        self.gender.is_none()
            && self.age_group.is_none()
            && self.ethnicity.is_none()
            && self.health_issues.is_empty()
            && self.preferences.is_empty()
            && self.psqi.is_none()
            && self.actogram.is_none()
            && self.eeg_features.is_none()
    }
}

#[derive(Debug, Deserialize)]
struct ProfileDoc {
    #[serde(flatten)]
    profile: UserProfile,
    #[serde(default)]
    actogram_path: Option<String>,
}

/// Load an array of profiles. Relative `actogram_path` entries resolve
/// against the JSON file's directory.
pub fn load_profiles_json(path: &Path) -> Result<Vec<UserProfile>, FeedbackError> {
    let text = std::fs::read_to_string(path)?;
    let docs: Vec<ProfileDoc> = serde_json::from_str(&text)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    docs.into_iter()
        .map(|doc| {
            let mut profile = doc.profile;
            if let Some(rel) = doc.actogram_path {
                let p = base.join(rel);
                let bytes = std::fs::read(&p)?;
                profile.actogram = Some(ImagePayload::png(&bytes));
            }
            Ok(profile)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn profiles_load_from_json() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(
            f,
            r#"[{{"gender": "female", "health_issues": ["insomnia"],
                 "preferences": {{"environments": ["beach"], "animals": ["dogs"]}}}}]"#
        )
        .unwrap();
        let profiles = load_profiles_json(f.path()).unwrap();
        assert_eq!(profiles.len(), 1);
        assert_eq!(profiles[0].gender.as_deref(), Some("female"));
        assert_eq!(profiles[0].preferences.environments, vec!["beach"]);
        assert!(!profiles[0].is_empty());
    }
}
