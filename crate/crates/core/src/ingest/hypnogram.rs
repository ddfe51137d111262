//! Hypnogram ingestion from EDF+ annotation channels.
//!
//! Annotations are TAL-encoded (time-stamped annotation lists): each TAL is
//! `+onset[<0x15>duration]<0x14>label<0x14>...<0x14><0x00>`. Stage labels use
//! the Sleep-EDF vocabulary ("Sleep stage W", "Sleep stage 1", ...).

use super::edf::parse_edf_file;
use super::error::IngestError;
use super::types::{SleepStage, StageAnnotation};

const ONSET_DUR_SEP: u8 = 0x15;
const TEXT_SEP: u8 = 0x14;

/// Map a Sleep-EDF annotation string onto a stage code. Total over the six
/// published label strings; anything else is an error.
pub fn map_stage_label(label: &str) -> Result<SleepStage, IngestError> {
    match label {
        "Sleep stage W" => Ok(SleepStage::Wake),
        "Sleep stage 1" => Ok(SleepStage::Stage1),
        "Sleep stage 2" => Ok(SleepStage::Stage2),
        "Sleep stage 3" | "Sleep stage 4" => Ok(SleepStage::Stage34),
        "Sleep stage R" => Ok(SleepStage::Rem),
        "Movement time" | "Sleep stage ?" => Ok(SleepStage::UnknownOrMovement),
        other => Err(IngestError::UnknownLabel(other.to_string())),
    }
}

/// Parse a raw TAL byte stream into stage annotations. Timekeeping TALs
/// (empty label) are skipped.
pub fn parse_tal(bytes: &[u8]) -> Result<Vec<StageAnnotation>, IngestError> {
    let mut out = Vec::new();
    for tal in bytes.split(|&b| b == 0x00) {
        if tal.is_empty() {
            continue;
        }
        let mut fields = tal.split(|&b| b == TEXT_SEP);
        let Some(time_part) = fields.next() else {
            continue;
        };
        if time_part.is_empty() {
            continue;
        }
        let time_str = String::from_utf8_lossy(time_part);
        let (onset_str, duration_str) = match time_part.iter().position(|&b| b == ONSET_DUR_SEP) {
            Some(pos) => (
                String::from_utf8_lossy(&time_part[..pos]).to_string(),
                Some(String::from_utf8_lossy(&time_part[pos + 1..]).to_string()),
            ),
            None => (time_str.to_string(), None),
        };
        let onset_s: f64 = onset_str.trim().parse().map_err(|_| {
            IngestError::MalformedHeader(format!("bad TAL onset {onset_str:?}"))
        })?;
        let duration_s: f64 = match &duration_str {
            Some(d) => d.trim().parse().map_err(|_| {
                IngestError::MalformedHeader(format!("bad TAL duration {d:?}"))
            })?,
            None => 0.0,
        };
        for label in fields {
            if label.is_empty() {
                continue;
            }
            let text = String::from_utf8_lossy(label).trim().to_string();
            if text.is_empty() {
                continue;
            }
            let stage = map_stage_label(&text)?;
            if duration_s <= 0.0 {
                continue; // instantaneous event markers carry no stage span
            }
            out.push(StageAnnotation {
                onset_s,
                duration_s,
                stage,
            });
        }
    }

    out.sort_by(|a, b| a.onset_s.total_cmp(&b.onset_s));
    for pair in out.windows(2) {
        if pair[1].onset_s < pair[0].onset_s + pair[0].duration_s - 1e-9 {
            return Err(IngestError::OverlappingAnnotations {
                onset_s: pair[1].onset_s,
            });
        }
    }
    Ok(out)
}

/// Parse a hypnogram from either a full EDF+ file (annotation channels are
/// located via their signal label) or a bare TAL stream.
pub fn parse_hypnogram(bytes: &[u8]) -> Result<Vec<StageAnnotation>, IngestError> {
    // An EDF file starts with the version field "0" padded to 8 bytes; a bare
    // TAL stream starts with '+' or '-'.
    let looks_like_edf = bytes.len() >= 8 && bytes[0] == b'0' && bytes[1..8] == *b"       ";
    if !looks_like_edf {
        return parse_tal(bytes);
    }

    let file = parse_edf_file(bytes)?;
    let mut all = Vec::new();
    for (i, sig) in file.signals.iter().enumerate() {
        if !sig.is_annotation() {
            continue;
        }
        all.extend(parse_tal(&file.signal_bytes[i])?);
    }
    all.sort_by(|a, b| a.onset_s.total_cmp(&b.onset_s));
    for pair in all.windows(2) {
        if pair[1].onset_s < pair[0].onset_s + pair[0].duration_s - 1e-9 {
            return Err(IngestError::OverlappingAnnotations {
                onset_s: pair[1].onset_s,
            });
        }
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tal(onset: &str, duration: Option<&str>, labels: &[&str]) -> Vec<u8> {
        let mut bytes = onset.as_bytes().to_vec();
        if let Some(d) = duration {
            bytes.push(ONSET_DUR_SEP);
            bytes.extend(d.as_bytes());
        }
        for l in labels {
            bytes.push(TEXT_SEP);
            bytes.extend(l.as_bytes());
        }
        bytes.push(TEXT_SEP);
        bytes.push(0x00);
        bytes
    }

    #[test]
    fn single_wake_annotation() {
        // "+0<0x15>30<0x14>Sleep stage W<0x14><0x00>"
        let bytes = tal("+0", Some("30"), &["Sleep stage W"]);
        let anns = parse_hypnogram(&bytes).unwrap();
        assert_eq!(
            anns,
            vec![StageAnnotation {
                onset_s: 0.0,
                duration_s: 30.0,
                stage: SleepStage::Wake
            }]
        );
    }

    #[test]
    fn stages_three_and_four_merge() {
        let mut bytes = tal("+0", Some("30"), &["Sleep stage 3"]);
        bytes.extend(tal("+30", Some("30"), &["Sleep stage 4"]));
        let anns = parse_hypnogram(&bytes).unwrap();
        assert_eq!(anns.len(), 2);
        assert!(anns.iter().all(|a| a.stage == SleepStage::Stage34));
    }

    #[test]
    fn unknown_label_rejected() {
        let bytes = tal("+0", Some("30"), &["Sleep stage X"]);
        match parse_hypnogram(&bytes) {
            Err(IngestError::UnknownLabel(l)) => assert_eq!(l, "Sleep stage X"),
            other => panic!("expected UnknownLabel, got {other:?}"),
        }
    }

    #[test]
    fn overlap_rejected() {
        let mut bytes = tal("+0", Some("30"), &["Sleep stage W"]);
        bytes.extend(tal("+20", Some("30"), &["Sleep stage 1"]));
        assert!(matches!(
            parse_hypnogram(&bytes),
            Err(IngestError::OverlappingAnnotations { .. })
        ));
    }

    #[test]
    fn movement_and_unknown_map_to_code_five() {
        for label in ["Movement time", "Sleep stage ?"] {
            assert_eq!(
                map_stage_label(label).unwrap(),
                SleepStage::UnknownOrMovement
            );
        }
    }

    #[test]
    fn mapping_is_surjective_onto_codes() {
        let labels = [
            "Sleep stage W",
            "Sleep stage 1",
            "Sleep stage 2",
            "Sleep stage 3",
            "Sleep stage R",
            "Movement time",
        ];
        let mut codes: Vec<u8> = labels
            .iter()
            .map(|l| map_stage_label(l).unwrap().code())
            .collect();
        codes.sort_unstable();
        assert_eq!(codes, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn timekeeping_tal_skipped() {
        // Record-start TALs carry an onset and empty label list.
        let mut bytes = b"+0\x14\x14\x00".to_vec();
        bytes.extend(tal("+0", Some("30"), &["Sleep stage R"]));
        let anns = parse_hypnogram(&bytes).unwrap();
        assert_eq!(anns.len(), 1);
        assert_eq!(anns[0].stage, SleepStage::Rem);
    }

    #[test]
    fn hypnogram_inside_edf_file() {
        use crate::ingest::edf::{build_edf, SignalHeader};
        let mut payload = tal("+0", Some("60"), &["Sleep stage W"]);
        payload.extend(tal("+60", Some("30"), &["Sleep stage 2"]));
        if payload.len() % 2 == 1 {
            payload.push(0x00);
        }
        let samples: Vec<i16> = payload
            .chunks_exact(2)
            .map(|c| i16::from_le_bytes([c[0], c[1]]))
            .collect();
        let header = SignalHeader {
            label: "EDF Annotations".into(),
            physical_min: -1.0,
            physical_max: 1.0,
            digital_min: -32768,
            digital_max: 32767,
            samples_per_record: samples.len(),
        };
        let bytes = build_edf("S", 90.0, 1, &[(header, samples)]);
        let anns = parse_hypnogram(&bytes).unwrap();
        assert_eq!(anns.len(), 2);
        assert_eq!(anns[0].stage, SleepStage::Wake);
        assert_eq!(anns[1].stage, SleepStage::Stage2);
    }
}
