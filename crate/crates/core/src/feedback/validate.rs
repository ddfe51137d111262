//! Numeric-leak validation for generated imagery scripts: flags decimal
//! renderings of the supplied feature values and a lexicon of EEG terms that
//! should never reach a listener.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::dsp::FeatureVector;
use crate::llm_bridge::format_significant;

/// Lexical terms banned from imagery scripts (matched case-insensitively).
pub const BANNED_TERMS: [&str; 7] = [
    "alpha wave",
    "beta wave",
    "delta wave",
    "theta wave",
    "power spectrum",
    "Hz",
    "ratio of",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageryValidation {
    pub passed: bool,
    pub leaked_tokens: Vec<String>,
}

fn is_number_char(c: char) -> bool {
    c.is_ascii_digit() || c == '.'
}

/// Extend a banned-term match over a directly following number, so the
/// reported token reads like the leak ("ratio of 2.3").
fn extend_over_number(script: &str, mut end: usize) -> usize {
    let bytes = script.as_bytes();
    let mut probe = end;
    while probe < bytes.len() && bytes[probe] == b' ' {
        probe += 1;
    }
    let number_start = probe;
    while probe < bytes.len() && is_number_char(bytes[probe] as char) {
        probe += 1;
    }
    // A trailing dot is sentence punctuation, not part of the number.
    while probe > number_start && bytes[probe - 1] == b'.' {
        probe -= 1;
    }
    if probe > number_start {
        end = probe;
    }
    end
}

/// Scan a script for (a) decimal renderings of the supplied feature values at
/// 1-6 significant digits and (b) banned lexical terms. Matching is
/// deterministic and case-insensitive for terms. Single-digit integer
/// renderings are skipped so benign counts ("take 2 deep breaths" when a
/// ratio is 2.3) are not flagged.
pub fn validate_imagery(script: &str, features: &FeatureVector) -> ImageryValidation {
    let lower = script.to_lowercase();
    let mut spans: Vec<(usize, usize)> = Vec::new();
    let mut found: Vec<(usize, String)> = Vec::new();

    for term in BANNED_TERMS {
        let needle = term.to_lowercase();
        let mut from = 0;
        while let Some(pos) = lower[from..].find(&needle) {
            let start = from + pos;
            let mut end = start + needle.len();
            if term == "ratio of" {
                end = extend_over_number(script, end);
            }
            spans.push((start, end));
            found.push((start, script[start..end].to_string()));
            from = end;
        }
    }

    let mut renderings: BTreeSet<String> = BTreeSet::new();
    for value in features.flat_values() {
        for digits in 1..=6 {
            let r = format_significant(value, digits);
            let bare_small_int = !r.contains('.') && r.trim_start_matches('-').len() <= 1;
            if bare_small_int {
                continue;
            }
            renderings.insert(r);
        }
    }

    let bytes = script.as_bytes();
    for r in &renderings {
        let mut from = 0;
        while let Some(pos) = script[from..].find(r.as_str()) {
            let start = from + pos;
            let end = start + r.len();
            let standalone = (start == 0 || !is_number_char(bytes[start - 1] as char))
                && (end == bytes.len() || !is_number_char(bytes[end] as char));
            let inside_existing = spans.iter().any(|&(s, e)| start >= s && end <= e);
            if standalone && !inside_existing {
                spans.push((start, end));
                found.push((start, r.clone()));
            }
            from = start + 1;
        }
    }

    found.sort_by_key(|(start, _)| *start);
    let leaked_tokens: Vec<String> = found.into_iter().map(|(_, t)| t).collect();
    ImageryValidation {
        passed: leaked_tokens.is_empty(),
        leaked_tokens,
    }
}
