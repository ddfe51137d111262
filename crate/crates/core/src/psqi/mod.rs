//! Pittsburgh Sleep Quality Index: questionnaire model, the seven component
//! scores, the global score with the poor-sleeper cutoff, and prompt-ready
//! text rendering.

mod scoring;
mod text;

pub use scoring::{
    classify_sleeper, score_components, ClockTime, PsqiError, PsqiResponse, PsqiScore,
    SleepQuality, DISTURBANCE_ITEMS, POOR_SLEEPER_CUTOFF,
};
pub use text::to_prompt_text;

use std::path::Path;

/// One questionnaire administration read from the participants CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct PsqiRecord {
    pub subject_id: String,
    /// "pre" or "post" study administration.
    pub administration: String,
    pub response: PsqiResponse,
}

/// Read the PSQI responses CSV: one row per participant per administration.
///
/// Columns: `subject_id, administration, bedtime, waketime, latency_min,
/// sleep_hours, cant_sleep_30min, q5b..q5j (nine disturbance items),
/// other_reason, subjective_quality, medication, trouble_staying_awake,
/// low_enthusiasm`. Clock times are `HH:MM`.
pub fn load_psqi_csv(path: &Path) -> Result<Vec<PsqiRecord>, PsqiError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| PsqiError::Io(e.to_string()))?;
    let headers = reader
        .headers()
        .map_err(|e| PsqiError::Io(e.to_string()))?
        .clone();
    let col = |name: &str| -> Result<usize, PsqiError> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| PsqiError::IncompleteResponse(vec![name.to_string()]))
    };

    let fixed = [
        "subject_id",
        "administration",
        "bedtime",
        "waketime",
        "latency_min",
        "sleep_hours",
        "cant_sleep_30min",
    ];
    let disturbance_cols: Vec<String> = (0..9).map(|i| format!("q5{}", (b'b' + i) as char)).collect();
    let tail = [
        "other_reason",
        "subjective_quality",
        "medication",
        "trouble_staying_awake",
        "low_enthusiasm",
    ];

    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| PsqiError::Io(e.to_string()))?;
        let get = |name: &str| -> Result<String, PsqiError> {
            Ok(record.get(col(name)?).unwrap_or("").trim().to_string())
        };
        let missing: Vec<String> = fixed
            .iter()
            .chain(disturbance_cols.iter().map(|s| s.as_str()).collect::<Vec<_>>().iter())
            .chain(tail.iter())
            .filter(|name| **name != "other_reason")
            .filter(|name| get(name).map(|v| v.is_empty()).unwrap_or(true))
            .map(|name| name.to_string())
            .collect();
        if !missing.is_empty() {
            return Err(PsqiError::IncompleteResponse(missing));
        }

        let ordinal = |name: &str| -> Result<u8, PsqiError> {
            let v = get(name)?;
            v.parse::<u8>()
                .ok()
                .filter(|x| *x <= 3)
                .ok_or_else(|| PsqiError::InvalidOrdinal {
                    item: name.to_string(),
                    value: v,
                })
        };
        let mut disturbances = [0u8; 9];
        for (i, name) in disturbance_cols.iter().enumerate() {
            disturbances[i] = ordinal(name)?;
        }
        let other = get("other_reason")?;
        let latency_raw = get("latency_min")?;
        let hours_raw = get("sleep_hours")?;
        let response = PsqiResponse {
            bedtime: ClockTime::parse(&get("bedtime")?)?,
            waketime: ClockTime::parse(&get("waketime")?)?,
            latency_min: latency_raw
                .parse()
                .map_err(|_| PsqiError::InvalidOrdinal {
                    item: "latency_min".into(),
                    value: latency_raw.clone(),
                })?,
            sleep_hours: hours_raw
                .parse()
                .map_err(|_| PsqiError::InvalidOrdinal {
                    item: "sleep_hours".into(),
                    value: hours_raw.clone(),
                })?,
            cant_sleep_30min: ordinal("cant_sleep_30min")?,
            disturbances,
            other_reason: if other.is_empty() { None } else { Some(other) },
            subjective_quality: ordinal("subjective_quality")?,
            medication: ordinal("medication")?,
            trouble_staying_awake: ordinal("trouble_staying_awake")?,
            low_enthusiasm: ordinal("low_enthusiasm")?,
        };
        out.push(PsqiRecord {
            subject_id: get("subject_id")?,
            administration: get("administration")?,
            response,
        });
    }
    Ok(out)
}
