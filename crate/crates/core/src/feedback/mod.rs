//! Personalized sleep-feedback prompts: improvement suggestions and guided
//! imagery scripts conditioned on user profiles, plus the numeric-leak
//! validator for generated imagery.

mod profile;
mod validate;

pub use profile::{load_profiles_json, Preferences, UserProfile};
pub use validate::{validate_imagery, ImageryValidation, BANNED_TERMS};

use thiserror::Error;

use crate::llm_bridge::{feature_text, PromptBundle, Task};
use crate::psqi::to_prompt_text;

#[derive(Debug, Error)]
pub enum FeedbackError {
    #[error("profile has no usable fields")]
    EmptyProfile,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("profile JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub const THERAPIST_SYSTEM: &str = "You are a sleep therapist.";

/// Clause appended to imagery prompts when EEG features are supplied.
pub const NO_NUMERIC_CLAUSE: &str = "Do not include actual numerical EEG features, brain waves, power spectrum, or different frequencies of waves in the script but include the state estimated from the features.";

/// A short, number-free description of the state the features suggest.
/// Ranks the band powers and maps the dominant band onto a sleep/arousal
/// phrase.
pub fn estimated_state_phrase(features: &crate::dsp::FeatureVector) -> &'static str {
    let mut sums = [0.0f64; 4]; // delta, theta, alpha, beta
    for ch in &features.channels {
        sums[0] += ch.delta_pow;
        sums[1] += ch.theta_pow;
        sums[2] += ch.alpha_pow;
        sums[3] += ch.beta_pow;
    }
    let dominant = (0..4)
        .max_by(|&a, &b| sums[a].total_cmp(&sums[b]))
        .unwrap_or(0);
    match dominant {
        0 => "a deep, restful state with slow, rolling brain activity",
        1 => "a drowsy, drifting state on the edge of sleep",
        2 => "a calm, relaxed wakefulness",
        _ => "an alert, active state of mind",
    }
}

fn serialize_profile(profile: &UserProfile) -> String {
    let mut parts: Vec<String> = Vec::new();
    if let Some(g) = &profile.gender {
        parts.push(format!("gender: {g}"));
    }
    if let Some(a) = &profile.age_group {
        parts.push(format!("age group: {a}"));
    }
    if let Some(e) = &profile.ethnicity {
        parts.push(format!("ethnicity: {e}"));
    }
    if !profile.health_issues.is_empty() {
        parts.push(format!("health issues: {}", profile.health_issues.join(", ")));
    }
    let p = &profile.preferences;
    if !p.environments.is_empty() {
        parts.push(format!("favorite environments: {}", p.environments.join(", ")));
    }
    if !p.animals.is_empty() {
        parts.push(format!("favorite animals: {}", p.animals.join(", ")));
    }
    if !p.hobbies.is_empty() {
        parts.push(format!("hobbies: {}", p.hobbies.join(", ")));
    }
    parts.join("; ")
}

/// Build the sleep-improvement-suggestion prompt. Every non-empty profile
/// field reaches the prompt; EEG features appear only as an estimated-state
/// phrase, never as numbers (suggestions target habitual behavior, not
/// momentary EEG).
pub fn build_suggestion_prompt(profile: &UserProfile) -> Result<PromptBundle, FeedbackError> {
    if profile.is_empty() {
        return Err(FeedbackError::EmptyProfile);
    }
    let mut bundle = PromptBundle::new(THERAPIST_SYSTEM, Task::Suggestion);
    let mut text = String::new();
    let serialized = serialize_profile(profile);
    if serialized.is_empty() {
        text.push_str("The participant is described below.");
    } else {
        text.push_str(&format!("The participant is {serialized}."));
    }
    if let Some(psqi) = &profile.psqi {
        text.push_str("\n\nThe participant's Pittsburgh Sleep Quality Index answers:\n");
        text.push_str(&to_prompt_text(psqi));
    }
    if let Some(fv) = &profile.eeg_features {
        text.push_str(&format!(
            "\n\nRecent EEG recordings suggest {}.",
            estimated_state_phrase(fv)
        ));
    }
    text.push_str(
        "\n\nReflecting on the participant's profile, please generate suggestions grounded in good sleep-hygiene practice to help the participant sleep better.",
    );
    bundle.push_text(text);
    if let Some(actogram) = &profile.actogram {
        bundle.push_text("The participant's activity actogram (x axis: time 0am-0am, y-axis: dates) is attached.".to_string());
        bundle.push_image(actogram.clone());
    }
    Ok(bundle)
}

/// Build the guided-imagery prompt. Preferences and issues steer the scene;
/// when EEG features are present their values are included as context and the
/// no-numeric-leakage clause is appended.
pub fn build_imagery_prompt(profile: &UserProfile) -> Result<PromptBundle, FeedbackError> {
    if profile.is_empty() {
        return Err(FeedbackError::EmptyProfile);
    }
    let mut bundle = PromptBundle::new(THERAPIST_SYSTEM, Task::GuidedImagery);
    let mut text = String::new();
    let serialized = serialize_profile(profile);
    if !serialized.is_empty() {
        text.push_str(&format!("The participant is {serialized}."));
    }
    if profile
        .health_issues
        .iter()
        .any(|h| h.to_ascii_lowercase().contains("ptsd"))
    {
        text.push_str(
            "\nKeep the scene gentle and grounding, and remind the participant that the imagined place is a safe space where no harm can reach them.",
        );
    }
    if let Some(psqi) = &profile.psqi {
        text.push_str("\n\nThe participant's Pittsburgh Sleep Quality Index answers:\n");
        text.push_str(&to_prompt_text(psqi));
    }
    text.push_str(
        "\n\nUsing the Guided Imagery technique, please generate a guided imagery script that engages all senses to help the participant fall asleep.",
    );
    if let Some(fv) = &profile.eeg_features {
        text.push_str(
            "\n\nGenerate the script based on the following 30-s epoch EEG features:\n",
        );
        text.push_str(&feature_text(&fv.flat_names(), &fv.flat_values()));
        text.push_str(&format!("\n{NO_NUMERIC_CLAUSE}"));
    }
    bundle.push_text(text);
    if let Some(actogram) = &profile.actogram {
        bundle.push_text("The participant's activity actogram (x axis: time 0am-0am, y-axis: dates) is attached.".to_string());
        bundle.push_image(actogram.clone());
    }
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsp::{ChannelFeatures, FeatureVector};

    fn features(delta: f64, theta: f64, alpha: f64, beta: f64) -> FeatureVector {
        FeatureVector {
            channels: vec![ChannelFeatures {
                channel: "EEG Fpz-Cz".into(),
                delta_pow: delta,
                theta_pow: theta,
                alpha_pow: alpha,
                beta_pow: beta,
                amplitude: 11.215,
                std_dev: 14.112,
                kurtosis: 0.31,
                alpha_delta_ratio: alpha / delta,
                theta_alpha_ratio: theta / alpha,
                delta_theta_ratio: delta / theta,
                p90_amplitude: 24.75,
                constant_signal: false,
            }],
        }
    }

    #[test]
    fn health_issue_appears_verbatim() {
        let profile = UserProfile {
            health_issues: vec!["headaches disturb sleep".into()],
            ..Default::default()
        };
        let bundle = build_suggestion_prompt(&profile).unwrap();
        assert!(bundle.joined_text().contains("headaches disturb sleep"));
        assert_eq!(bundle.system_text, THERAPIST_SYSTEM);
    }

    #[test]
    fn beach_preference_steers_imagery() {
        let profile = UserProfile {
            preferences: Preferences {
                environments: vec!["beach".into()],
                ..Default::default()
            },
            ..Default::default()
        };
        let bundle = build_imagery_prompt(&profile).unwrap();
        assert!(bundle.joined_text().contains("favorite environments: beach"));
    }

    #[test]
    fn eeg_features_add_constraint_clause() {
        let profile = UserProfile {
            preferences: Preferences {
                environments: vec!["forest".into()],
                ..Default::default()
            },
            eeg_features: Some(features(4.0, 2.0, 1.0, 0.5)),
            ..Default::default()
        };
        let bundle = build_imagery_prompt(&profile).unwrap();
        let text = bundle.joined_text();
        assert!(text.contains(NO_NUMERIC_CLAUSE));
        // Feature values are context for the model.
        assert!(text.contains("EEG Fpz-Cz_delta_pow: 4.00000"));
    }

    #[test]
    fn suggestion_prompt_never_contains_feature_numbers() {
        let profile = UserProfile {
            health_issues: vec!["stress".into()],
            eeg_features: Some(features(4.0, 2.0, 1.0, 0.5)),
            ..Default::default()
        };
        let bundle = build_suggestion_prompt(&profile).unwrap();
        let text = bundle.joined_text();
        assert!(!text.contains("4.00000"));
        assert!(!text.contains("14.112"));
        assert!(!text.contains("24.75"));
        // The state estimated from the features does appear.
        assert!(text.contains("deep, restful state"));
    }

    #[test]
    fn ptsd_profile_gets_safety_framing() {
        let profile = UserProfile {
            health_issues: vec!["PTSD".into()],
            ..Default::default()
        };
        let bundle = build_imagery_prompt(&profile).unwrap();
        assert!(bundle.joined_text().contains("safe space"));
    }

    #[test]
    fn empty_profile_rejected() {
        assert!(matches!(
            build_suggestion_prompt(&UserProfile::default()),
            Err(FeedbackError::EmptyProfile)
        ));
        assert!(matches!(
            build_imagery_prompt(&UserProfile::default()),
            Err(FeedbackError::EmptyProfile)
        ));
    }

    #[test]
    fn dominant_band_picks_phrase() {
        assert_eq!(
            estimated_state_phrase(&features(4.0, 1.0, 1.0, 1.0)),
            "a deep, restful state with slow, rolling brain activity"
        );
        assert_eq!(
            estimated_state_phrase(&features(1.0, 1.0, 5.0, 1.0)),
            "a calm, relaxed wakefulness"
        );
        assert_eq!(
            estimated_state_phrase(&features(1.0, 1.0, 1.0, 9.0)),
            "an alert, active state of mind"
        );
    }
}
