//! Question-by-question textual rendering of a PSQI response, used as the
//! LLM prompt payload for sleep-quality detection.

use super::scoring::{PsqiResponse, DISTURBANCE_ITEMS};

const FREQUENCY_WORDS: [&str; 4] = [
    "not during the past month",
    "less than once a week",
    "once or twice a week",
    "three or more times a week",
];

const QUALITY_WORDS: [&str; 4] = ["very good", "fairly good", "fairly bad", "very bad"];

fn freq(code: u8) -> &'static str {
    FREQUENCY_WORDS[code.min(3) as usize]
}

/// Deterministic rendering in questionnaire order. Free-text reasons appear
/// verbatim.
pub fn to_prompt_text(resp: &PsqiResponse) -> String {
    let mut lines = Vec::new();
    lines.push(format!(
        "During the past month, what time have you usually gone to bed at night?: {}",
        resp.bedtime
    ));
    lines.push(format!(
        "During the past month, how long (in minutes) has it usually taken you to fall asleep each night?: {} minutes",
        resp.latency_min
    ));
    lines.push(format!(
        "During the past month, what time have you usually gotten up in the morning?: {}",
        resp.waketime
    ));
    lines.push(format!(
        "During the past month, how many hours of actual sleep did you get at night?: {} hours",
        resp.sleep_hours
    ));
    lines.push(format!(
        "During the past month, how often have you had trouble sleeping because you cannot get to sleep within 30 minutes?: {}",
        freq(resp.cant_sleep_30min)
    ));
    for (item, &code) in DISTURBANCE_ITEMS.iter().zip(&resp.disturbances) {
        let mut line = format!(
            "During the past month, how often have you had trouble sleeping because you {item}?: {}",
            freq(code)
        );
        if item.starts_with("other") {
            if let Some(reason) = &resp.other_reason {
                line.push_str(&format!(" (reason: {reason})"));
            }
        }
        lines.push(line);
    }
    lines.push(format!(
        "During the past month, how would you rate your sleep quality overall?: {}",
        QUALITY_WORDS[resp.subjective_quality.min(3) as usize]
    ));
    lines.push(format!(
        "During the past month, how often have you taken medicine to help you sleep?: {}",
        freq(resp.medication)
    ));
    lines.push(format!(
        "During the past month, how often have you had trouble staying awake while driving, eating meals, or engaging in social activity?: {}",
        freq(resp.trouble_staying_awake)
    ));
    lines.push(format!(
        "During the past month, how much of a problem has it been for you to keep up enough enthusiasm to get things done?: {}",
        freq(resp.low_enthusiasm)
    ));
    lines.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psqi::scoring::best_case_response;

    #[test]
    fn rendering_is_deterministic_and_ordered() {
        let resp = best_case_response();
        let a = to_prompt_text(&resp);
        let b = to_prompt_text(&resp);
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 18);
        assert!(a.starts_with("During the past month, what time have you usually gone to bed"));
    }

    #[test]
    fn distinct_responses_render_distinct_text() {
        let a = best_case_response();
        let mut b = a.clone();
        b.sleep_hours = 4.0;
        assert_ne!(to_prompt_text(&a), to_prompt_text(&b));
    }

    #[test]
    fn free_text_reason_appears_verbatim() {
        let mut resp = best_case_response();
        resp.disturbances[8] = 2;
        resp.other_reason = Some("OCD".into());
        let text = to_prompt_text(&resp);
        assert!(text.contains("(reason: OCD)"), "{text}");
    }
}
