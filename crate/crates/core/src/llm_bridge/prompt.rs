//! Prompt construction for the zero-shot and in-context protocols. Rendering
//! is deterministic: identical inputs produce identical bundles.

use super::error::LlmError;
use super::types::{ImageKind, Payload, PromptBundle, Task, UserPart};

pub const ANALYST_SYSTEM: &str =
    "You are a data analyst who reviews EEG data and helps interpret participant's conditions.";
pub const NEUROLOGIST_SYSTEM: &str =
    "You are a data analyst helping a neurologist understand human sleep data.";

/// Render a value to `digits` significant digits (plain decimal notation).
pub fn format_significant(value: f64, digits: usize) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{value}");
    }
    let exp = value.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    format!("{value:.decimals$}")
}

/// One feature per line, 6 significant digits.
pub fn feature_text(names: &[String], values: &[f64]) -> String {
    names
        .iter()
        .zip(values)
        .map(|(n, v)| format!("{n}: {}", format_significant(*v, 6)))
        .collect::<Vec<_>>()
        .join("\n")
}

fn image_description(kind: ImageKind) -> (&'static str, &'static str) {
    // (what the image is, axis description)
    match kind {
        ImageKind::Spectrogram => (
            "the power spectrum data of EEG data",
            "The data has an x-axis of time and a y-axis of frequency (0-40 Hz).",
        ),
        ImageKind::Waveform => (
            "the EEG waveform data",
            "The data has an x axis of time and a y axis of amplitude.",
        ),
        ImageKind::Actogram => (
            "the following graph made from smartphone activity sensor data",
            "The data has an x-axis of time (midnight to midnight) and a y-axis of date. For each hour, we computed the mean of activities where 0: Stationary, 1: Walking, 2: Running, 3: Unknown.",
        ),
        ImageKind::AvgActivity => (
            "the following graph made from smartphone activity sensor data",
            "The data has an x-axis of time (midnight to midnight) and a y-axis of the hourly mean and variation of activities where 0: Stationary, 1: Walking, 2: Running, 3: Unknown.",
        ),
    }
}

const ATTENTION_REQUEST: &str = "We would like to classify the user state into 2 categories: focused or unfocused, confidence level (0-100%), and explanations.\nPlease return your response in JSON format.";

const SLEEP_STAGE_REQUEST: &str = "Please provide\n1. a description of the data\n2. the estimated sleep stage as a number from 0 to 5 (0:wake, 1: stage 1, 2: stage 2, 3: stage 3 or 4, 4: REM, 5: unknown or movement)\n3. confidence level (0-100%)\n4. explanations\nin JSON format.";

const SLEEP_QUALITY_REQUEST: &str = "Based on this data, please give me the following information.\n(1) if this person has good sleep quality or poor quality\n(2) confidence level (0-100%)\n(3) explanations for the decision.\n(4) suggestions to improve sleep quality.\nPlease return your response in JSON format.";

/// Build a zero-shot prompt: the task template with the payload inserted.
pub fn build_zero_shot(task: Task, payload: &Payload) -> Result<PromptBundle, LlmError> {
    match (task, payload) {
        (Task::Attention, Payload::Image(kind, image))
            if matches!(kind, ImageKind::Spectrogram | ImageKind::Waveform) =>
        {
            let (what, axes) = image_description(*kind);
            let mut bundle = PromptBundle::new(ANALYST_SYSTEM, task);
            bundle.push_text(format!(
                "Please review {what}.\n{axes}\nThe data is collected from healthy participants who went through cognitive tasks.\n{ATTENTION_REQUEST}"
            ));
            bundle.push_image(image.clone());
            Ok(bundle)
        }
        (Task::Attention, Payload::FeatureText(text)) => {
            let mut bundle = PromptBundle::new(ANALYST_SYSTEM, task);
            bundle.push_text(format!(
                "Please review the following EEG features computed from EEG data.\nThe data is collected from healthy participants who went through cognitive tasks.\n{ATTENTION_REQUEST}\n\n{text}"
            ));
            Ok(bundle)
        }
        (Task::SleepStage, Payload::Image(kind, image))
            if matches!(kind, ImageKind::Spectrogram | ImageKind::Waveform) =>
        {
            let (what, axes) = image_description(*kind);
            let mut bundle = PromptBundle::new(ANALYST_SYSTEM, task);
            bundle.push_text(format!(
                "Please review {what}.\n{axes}\nThe data is collected from healthy participants who went through sleep.\n{SLEEP_STAGE_REQUEST}"
            ));
            bundle.push_image(image.clone());
            Ok(bundle)
        }
        (Task::SleepStage, Payload::FeatureText(text)) => {
            let mut bundle = PromptBundle::new(ANALYST_SYSTEM, task);
            bundle.push_text(format!(
                "Please review the following EEG features computed from EEG data.\nThe data is collected from healthy participants who went through sleep.\n{SLEEP_STAGE_REQUEST}\n\n{text}"
            ));
            Ok(bundle)
        }
        (Task::SleepQualityPsqi, Payload::PsqiText(text)) => {
            let mut bundle = PromptBundle::new(NEUROLOGIST_SYSTEM, task);
            bundle.push_text(format!(
                "Task: This is the data collected from users who fill out the Pittsburgh Sleep Quality Index questionnaire.\n{SLEEP_QUALITY_REQUEST}\n\n{text}"
            ));
            Ok(bundle)
        }
        (Task::SleepQualityActivity, Payload::Image(kind, image))
            if matches!(kind, ImageKind::Actogram | ImageKind::AvgActivity) =>
        {
            let (what, axes) = image_description(*kind);
            let mut bundle = PromptBundle::new(NEUROLOGIST_SYSTEM, task);
            bundle.push_text(format!(
                "Please review {what}.\n{axes}\nPlease describe\n(1) estimated sleep quality (good or poor)\n(2) confidence level (0-100%)\n(3) explanations\n(4) suggestions to improve sleep quality\nin JSON format."
            ));
            bundle.push_image(image.clone());
            Ok(bundle)
        }
        _ => Err(LlmError::PayloadKindMismatch { task }),
    }
}

/// Stage display names in code order, used by the 6-image template.
const STAGE_SEQUENCE: [&str; 5] = ["0", "1", "2", "3", "4"];

/// Build an in-context prompt from labeled examples plus a query.
///
/// The sleep-stage image variant requires exactly 5 image examples labeled
/// with stage codes 0-4 in order and renders the 6-image template. All other
/// variants render examples as `features -> label` blocks before the query.
pub fn build_in_context(
    task: Task,
    examples: &[(Payload, String)],
    query: &Payload,
) -> Result<PromptBundle, LlmError> {
    if examples.is_empty() {
        return Err(LlmError::WrongExampleCount {
            expected: 1,
            actual: 0,
        });
    }
    let image_query = matches!(query, Payload::Image(_, _));
    match (task, image_query) {
        (Task::SleepStage, true) => build_sleep_stage_images(examples, query),
        (Task::Attention, true) => build_attention_images(examples, query),
        (Task::Attention | Task::SleepStage, false) => build_feature_examples(task, examples, query),
        _ => Err(LlmError::PayloadKindMismatch { task }),
    }
}

fn build_sleep_stage_images(
    examples: &[(Payload, String)],
    query: &Payload,
) -> Result<PromptBundle, LlmError> {
    if examples.len() != 5 {
        return Err(LlmError::WrongExampleCount {
            expected: 5,
            actual: examples.len(),
        });
    }
    let mut seen = Vec::new();
    for (_, label) in examples {
        if seen.contains(label) {
            return Err(LlmError::DuplicateStageExample(label.clone()));
        }
        seen.push(label.clone());
    }
    if seen != STAGE_SEQUENCE {
        return Err(LlmError::StageExamplesOutOfOrder);
    }

    let mut bundle = PromptBundle::new(ANALYST_SYSTEM, Task::SleepStage);
    bundle.push_text(
        "Please review the following 6 EEG data.\nThe data has an x axis of time and a y axis of amplitude.\nThe data is collected from healthy participants who went through sleep.\nThe first 5 images were collected during wake state (W), stage 1, stage 2, stage 3&4, and REM sleep. Please provide\n1. a description of each image\n2. estimate the sleep stage of the 6th (last) image and return a number from 0 to 5 (0:wake, 1: stage 1, 2: stage 2, 3: stage 3 or 4, 4: REM, 5: unknown or movement)\n3. confidence level (0-100%)\n4. explanations\nin JSON format.".to_string(),
    );
    for (payload, _) in examples {
        let Payload::Image(_, image) = payload else {
            return Err(LlmError::PayloadKindMismatch {
                task: Task::SleepStage,
            });
        };
        bundle.push_image(image.clone());
    }
    let Payload::Image(_, image) = query else {
        return Err(LlmError::PayloadKindMismatch {
            task: Task::SleepStage,
        });
    };
    bundle.push_image(image.clone());
    Ok(bundle)
}

fn build_attention_images(
    examples: &[(Payload, String)],
    query: &Payload,
) -> Result<PromptBundle, LlmError> {
    let labels: Vec<&str> = examples.iter().map(|(_, l)| l.as_str()).collect();
    let mut bundle = PromptBundle::new(ANALYST_SYSTEM, Task::Attention);
    bundle.push_text(format!(
        "Please review the following {} EEG power spectrum images.\nThe data has an x-axis of time and a y-axis of frequency (0-40 Hz).\nThe data is collected from healthy participants who went through cognitive tasks.\nThe first {} images were collected during the following states in order: {}.\nPlease provide\n1. a description of each image\n2. the user state of the last image classified into 2 categories: focused or unfocused\n3. confidence level (0-100%)\n4. explanations\nin JSON format.",
        examples.len() + 1,
        examples.len(),
        labels.join(", ")
    ));
    for (payload, _) in examples {
        let Payload::Image(_, image) = payload else {
            return Err(LlmError::PayloadKindMismatch {
                task: Task::Attention,
            });
        };
        bundle.push_image(image.clone());
    }
    let Payload::Image(_, image) = query else {
        return Err(LlmError::PayloadKindMismatch {
            task: Task::Attention,
        });
    };
    bundle.push_image(image.clone());
    Ok(bundle)
}

fn build_feature_examples(
    task: Task,
    examples: &[(Payload, String)],
    query: &Payload,
) -> Result<PromptBundle, LlmError> {
    let Payload::FeatureText(query_text) = query else {
        return Err(LlmError::PayloadKindMismatch { task });
    };
    let mut blocks = Vec::with_capacity(examples.len());
    for (payload, label) in examples {
        let Payload::FeatureText(text) = payload else {
            return Err(LlmError::PayloadKindMismatch { task });
        };
        blocks.push(format!("Features:\n{text}\nLabel: {label}"));
    }
    let request = match task {
        Task::Attention => ATTENTION_REQUEST,
        _ => SLEEP_STAGE_REQUEST,
    };
    let domain = match task {
        Task::Attention => "cognitive tasks",
        _ => "sleep",
    };
    let mut bundle = PromptBundle::new(ANALYST_SYSTEM, task);
    bundle.push_text(format!(
        "Please review the following labeled examples of EEG features and then classify the final example.\nThe data is collected from healthy participants who went through {domain}.\n\n{}\n\nFeatures:\n{query_text}\n\n{request}",
        blocks.join("\n\n")
    ));
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::llm_bridge::types::ImagePayload;

    fn png() -> ImagePayload {
        ImagePayload::png(&[1, 2, 3])
    }

    #[test]
    fn attention_spectrogram_template() {
        let bundle = build_zero_shot(
            Task::Attention,
            &Payload::Image(ImageKind::Spectrogram, png()),
        )
        .unwrap();
        let text = bundle.joined_text();
        assert!(text.contains("classify the user state into 2 categories: focused or unfocused"));
        assert!(text.contains("x-axis of time and a y-axis of frequency (0-40 Hz)"));
        assert!(bundle.system_text.contains("data analyst"));
        assert_eq!(bundle.image_count(), 1);
    }

    #[test]
    fn sleep_quality_psqi_template() {
        let bundle = build_zero_shot(
            Task::SleepQualityPsqi,
            &Payload::PsqiText("During the past month...".into()),
        )
        .unwrap();
        let text = bundle.joined_text();
        assert!(text.contains("(1) if this person has good sleep quality or poor quality"));
        assert!(text.contains("Pittsburgh Sleep Quality Index"));
    }

    #[test]
    fn zero_shot_is_deterministic() {
        let payload = Payload::Image(ImageKind::Spectrogram, png());
        let a = build_zero_shot(Task::Attention, &payload).unwrap();
        let b = build_zero_shot(Task::Attention, &payload).unwrap();
        assert_eq!(a.canonical_json(), b.canonical_json());
        assert_eq!(a.hash(), b.hash());
    }

    #[test]
    fn bad_payload_kind_rejected() {
        assert!(matches!(
            build_zero_shot(Task::Attention, &Payload::PsqiText("x".into())),
            Err(LlmError::PayloadKindMismatch { .. })
        ));
        assert!(matches!(
            build_zero_shot(
                Task::SleepQualityPsqi,
                &Payload::Image(ImageKind::Actogram, png())
            ),
            Err(LlmError::PayloadKindMismatch { .. })
        ));
    }

    fn stage_examples() -> Vec<(Payload, String)> {
        (0..5)
            .map(|i| {
                (
                    Payload::Image(ImageKind::Waveform, png()),
                    i.to_string(),
                )
            })
            .collect()
    }

    #[test]
    fn six_image_template() {
        let bundle = build_in_context(
            Task::SleepStage,
            &stage_examples(),
            &Payload::Image(ImageKind::Waveform, png()),
        )
        .unwrap();
        let text = bundle.joined_text();
        assert!(text.contains("review the following 6 EEG data"));
        assert!(text.contains(
            "The first 5 images were collected during wake state (W), stage 1, stage 2, stage 3&4, and REM sleep"
        ));
        assert_eq!(bundle.image_count(), 6);
    }

    #[test]
    fn wrong_example_count_rejected() {
        let four = stage_examples()[..4].to_vec();
        assert!(matches!(
            build_in_context(
                Task::SleepStage,
                &four,
                &Payload::Image(ImageKind::Waveform, png())
            ),
            Err(LlmError::WrongExampleCount {
                expected: 5,
                actual: 4
            })
        ));
    }

    #[test]
    fn duplicate_stage_rejected() {
        let mut examples = stage_examples();
        examples[3].1 = "1".into();
        assert!(matches!(
            build_in_context(
                Task::SleepStage,
                &examples,
                &Payload::Image(ImageKind::Waveform, png())
            ),
            Err(LlmError::DuplicateStageExample(_))
        ));
    }

    #[test]
    fn out_of_order_stages_rejected() {
        let mut examples = stage_examples();
        examples.swap(0, 4);
        assert!(matches!(
            build_in_context(
                Task::SleepStage,
                &examples,
                &Payload::Image(ImageKind::Waveform, png())
            ),
            Err(LlmError::StageExamplesOutOfOrder)
        ));
    }

    #[test]
    fn feature_text_in_context_renders_example_lines() {
        let examples = vec![
            (
                Payload::FeatureText("alpha_pow: 1.00000".into()),
                "focused".to_string(),
            ),
            (
                Payload::FeatureText("alpha_pow: 9.00000".into()),
                "unfocused".to_string(),
            ),
        ];
        let bundle = build_in_context(
            Task::Attention,
            &examples,
            &Payload::FeatureText("alpha_pow: 2.00000".into()),
        )
        .unwrap();
        let text = bundle.joined_text();
        assert!(text.contains("Label: focused"));
        assert!(text.contains("Label: unfocused"));
        assert!(text.ends_with(ATTENTION_REQUEST));
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(0.16602712, 6), "0.166027");
        assert_eq!(format_significant(1234.5678, 6), "1234.57");
        assert_eq!(format_significant(2.3, 2), "2.3");
        assert_eq!(format_significant(0.0, 6), "0");
        assert_eq!(format_significant(-0.00123456789, 6), "-0.00123457");
    }

    #[test]
    fn feature_text_layout() {
        let names = vec!["AF3_alpha_pow".to_string(), "AF3_kurtosis".to_string()];
        let text = feature_text(&names, &[0.16602712, -1.5]);
        assert_eq!(text, "AF3_alpha_pow: 0.166027\nAF3_kurtosis: -1.50000");
    }
}
