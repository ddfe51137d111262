//! EDF/EDF+ parsing: 256-byte fixed ASCII header, 256 bytes of signal header
//! per signal, then data records of little-endian 16-bit two's-complement
//! samples. Digital values are mapped to physical units through the per-signal
//! linear calibration.

use chrono::{DateTime, NaiveDate, NaiveDateTime, NaiveTime, Utc};

use super::error::IngestError;
use super::types::{ChannelSeries, Recording, RecordingSource};

const FIXED_HEADER_LEN: usize = 256;
const PER_SIGNAL_HEADER_LEN: usize = 256;

/// Label carried by EDF+ annotation signals.
pub const ANNOTATION_LABEL: &str = "EDF Annotations";

/// Per-signal header fields needed to decode and calibrate samples.
#[derive(Debug, Clone)]
pub struct SignalHeader {
    pub label: String,
    pub physical_min: f64,
    pub physical_max: f64,
    pub digital_min: i32,
    pub digital_max: i32,
    pub samples_per_record: usize,
}

impl SignalHeader {
    pub fn is_annotation(&self) -> bool {
        self.label == ANNOTATION_LABEL
    }

    /// EDF linear calibration: phys_min + (d - dig_min) * (phys_max - phys_min)
    /// / (dig_max - dig_min).
    pub fn to_physical(&self, digital: i16) -> f64 {
        let scale =
            (self.physical_max - self.physical_min) / (self.digital_max - self.digital_min) as f64;
        self.physical_min + (digital as i32 - self.digital_min) as f64 * scale
    }
}

/// Parsed EDF header plus raw per-signal byte streams, before calibration.
pub struct EdfFile {
    pub start_time: DateTime<Utc>,
    pub patient_field: String,
    pub record_duration_s: f64,
    pub signals: Vec<SignalHeader>,
    /// Concatenated raw record payloads per signal (record order preserved).
    pub signal_bytes: Vec<Vec<u8>>,
}

fn field(bytes: &[u8], range: std::ops::Range<usize>) -> &[u8] {
    &bytes[range]
}

/// Free-text header field: trailing padding stripped, non-ASCII tolerated
/// (lossily replaced).
fn text_field(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).trim().to_string()
}

/// Numeric header field: must be ASCII and parse after trimming.
fn numeric_field_f64(bytes: &[u8], what: &str) -> Result<f64, IngestError> {
    if !bytes.is_ascii() {
        return Err(IngestError::MalformedHeader(format!(
            "non-ASCII bytes in numeric field `{what}`"
        )));
    }
    let s = String::from_utf8_lossy(bytes).trim().to_string();
    s.parse::<f64>().map_err(|_| {
        IngestError::MalformedHeader(format!("numeric field `{what}` unparseable: {s:?}"))
    })
}

fn numeric_field_i64(bytes: &[u8], what: &str) -> Result<i64, IngestError> {
    if !bytes.is_ascii() {
        return Err(IngestError::MalformedHeader(format!(
            "non-ASCII bytes in numeric field `{what}`"
        )));
    }
    let s = String::from_utf8_lossy(bytes).trim().to_string();
    s.parse::<i64>().map_err(|_| {
        IngestError::MalformedHeader(format!("numeric field `{what}` unparseable: {s:?}"))
    })
}

/// EDF start date is dd.mm.yy with yy 85-99 meaning 1985-1999.
fn parse_start(date: &str, time: &str) -> DateTime<Utc> {
    let fallback = NaiveDateTime::new(
        NaiveDate::from_ymd_opt(1970, 1, 1).unwrap(),
        NaiveTime::from_hms_opt(0, 0, 0).unwrap(),
    );
    let parse_parts = |s: &str| -> Option<(u32, u32, u32)> {
        let mut it = s.split(['.', ':']);
        let a = it.next()?.trim().parse().ok()?;
        let b = it.next()?.trim().parse().ok()?;
        let c = it.next()?.trim().parse().ok()?;
        Some((a, b, c))
    };
    let naive = (|| {
        let (d, m, y) = parse_parts(date)?;
        let year = if y >= 85 { 1900 + y as i32 } else { 2000 + y as i32 };
        let (h, mi, s) = parse_parts(time)?;
        Some(NaiveDateTime::new(
            NaiveDate::from_ymd_opt(year, m, d)?,
            NaiveTime::from_hms_opt(h, mi, s)?,
        ))
    })()
    .unwrap_or(fallback);
    DateTime::from_naive_utc_and_offset(naive, Utc)
}

/// Parse headers and split record payloads per signal. Shared by the signal
/// and hypnogram ingestion paths.
pub fn parse_edf_file(bytes: &[u8]) -> Result<EdfFile, IngestError> {
    if bytes.len() < FIXED_HEADER_LEN {
        return Err(IngestError::MalformedHeader(format!(
            "file shorter than the {FIXED_HEADER_LEN}-byte fixed header"
        )));
    }
    let head = &bytes[..FIXED_HEADER_LEN];

    let patient_field = text_field(field(head, 8..88));
    let start_date = text_field(field(head, 168..176));
    let start_time_s = text_field(field(head, 176..184));
    let header_len = numeric_field_i64(field(head, 184..192), "header bytes")?;
    let n_records = numeric_field_i64(field(head, 236..244), "record count")?;
    let record_duration_s = numeric_field_f64(field(head, 244..252), "record duration")?;
    let n_signals = numeric_field_i64(field(head, 252..256), "signal count")?;

    if n_signals <= 0 {
        return Err(IngestError::MalformedHeader(format!(
            "signal count must be positive, got {n_signals}"
        )));
    }
    let ns = n_signals as usize;
    let expected_header = FIXED_HEADER_LEN + ns * PER_SIGNAL_HEADER_LEN;
    if header_len as usize != expected_header {
        return Err(IngestError::MalformedHeader(format!(
            "header byte count {header_len} does not match {ns} signals (expected {expected_header})"
        )));
    }
    if bytes.len() < expected_header {
        return Err(IngestError::MalformedHeader(
            "file truncated inside signal headers".into(),
        ));
    }

    // Signal headers are stored column-major: all labels, all transducers, ...
    let sig = &bytes[FIXED_HEADER_LEN..expected_header];
    let col = |offset: usize, width: usize, i: usize| -> &[u8] {
        &sig[offset * ns + i * width..offset * ns + (i + 1) * width]
    };
    let mut signals = Vec::with_capacity(ns);
    for i in 0..ns {
        let label = text_field(col(0, 16, i));
        let physical_min = numeric_field_f64(col(16 + 80 + 8, 8, i), "physical min")?;
        let physical_max = numeric_field_f64(col(16 + 80 + 8 + 8, 8, i), "physical max")?;
        let digital_min = numeric_field_i64(col(16 + 80 + 8 + 16, 8, i), "digital min")? as i32;
        let digital_max = numeric_field_i64(col(16 + 80 + 8 + 24, 8, i), "digital max")? as i32;
        let samples_per_record =
            numeric_field_i64(col(16 + 80 + 8 + 32 + 80, 8, i), "samples per record")?;
        if samples_per_record <= 0 {
            return Err(IngestError::MalformedHeader(format!(
                "signal {i} declares {samples_per_record} samples per record"
            )));
        }
        signals.push(SignalHeader {
            label,
            physical_min,
            physical_max,
            digital_min,
            digital_max,
            samples_per_record: samples_per_record as usize,
        });
    }

    let record_len: usize = signals.iter().map(|s| s.samples_per_record * 2).sum();
    let data = &bytes[expected_header..];
    let actual_records = if n_records < 0 {
        // EDF+ allows -1 for "unknown"; derive from file length.
        if record_len == 0 || data.len() % record_len != 0 {
            return Err(IngestError::InconsistentRecord {
                expected: 0,
                actual: data.len(),
            });
        }
        data.len() / record_len
    } else {
        n_records as usize
    };
    if data.len() != actual_records * record_len {
        return Err(IngestError::InconsistentRecord {
            expected: actual_records * record_len,
            actual: data.len(),
        });
    }

    let mut signal_bytes: Vec<Vec<u8>> = signals
        .iter()
        .map(|s| Vec::with_capacity(actual_records * s.samples_per_record * 2))
        .collect();
    for r in 0..actual_records {
        let mut offset = r * record_len;
        for (i, s) in signals.iter().enumerate() {
            let n = s.samples_per_record * 2;
            signal_bytes[i].extend_from_slice(&data[offset..offset + n]);
            offset += n;
        }
    }

    Ok(EdfFile {
        start_time: parse_start(&start_date, &start_time_s),
        patient_field,
        record_duration_s,
        signals,
        signal_bytes,
    })
}

fn decode_i16_le(bytes: &[u8]) -> Vec<i16> {
    bytes
        .chunks_exact(2)
        .map(|c| i16::from_le_bytes([c[0], c[1]]))
        .collect()
}

/// Parse an EDF/EDF+ recording into physically calibrated channel series.
///
/// Annotation signals (`EDF Annotations`) carry TAL text, not samples, and are
/// skipped here; use [`super::parse_hypnogram`] to read them.
pub fn parse_edf(bytes: &[u8]) -> Result<Recording, IngestError> {
    let file = parse_edf_file(bytes)?;
    if file.record_duration_s <= 0.0 {
        return Err(IngestError::MalformedHeader(format!(
            "record duration must be positive, got {}",
            file.record_duration_s
        )));
    }

    let mut channels = Vec::new();
    for (i, s) in file.signals.iter().enumerate() {
        if s.is_annotation() {
            continue;
        }
        if s.digital_max == s.digital_min {
            return Err(IngestError::ZeroDigitalRange {
                signal: s.label.clone(),
            });
        }
        let samples: Vec<f64> = decode_i16_le(&file.signal_bytes[i])
            .into_iter()
            .map(|d| s.to_physical(d))
            .collect();
        channels.push(ChannelSeries {
            name: s.label.clone(),
            sample_rate_hz: s.samples_per_record as f64 / file.record_duration_s,
            samples,
        });
    }
    if channels.is_empty() {
        return Err(IngestError::MalformedHeader(
            "no ordinary signals in file".into(),
        ));
    }

    let subject_id = file
        .patient_field
        .split_whitespace()
        .next()
        .unwrap_or("unknown")
        .to_string();
    Ok(Recording {
        channels,
        start_time: file.start_time,
        subject_id,
        source: RecordingSource::Edf,
    })
}

/// Serialize a header field right-padded with spaces to `width` bytes.
pub(crate) fn pad_field(value: &str, width: usize) -> Vec<u8> {
    let mut out = value.as_bytes().to_vec();
    assert!(out.len() <= width, "field `{value}` exceeds {width} bytes");
    out.resize(width, b' ');
    out
}

/// Build a minimal single-purpose EDF byte stream. Used by tests and by the
/// CSV-to-EDF round-trip tooling; digital samples are written verbatim.
pub fn build_edf(
    patient: &str,
    record_duration_s: f64,
    n_records: usize,
    signals: &[(SignalHeader, Vec<i16>)],
) -> Vec<u8> {
    let ns = signals.len();
    let mut out = Vec::new();
    out.extend(pad_field("0", 8));
    out.extend(pad_field(patient, 80));
    out.extend(pad_field("recording", 80));
    out.extend(pad_field("01.01.20", 8));
    out.extend(pad_field("00.00.00", 8));
    out.extend(pad_field(&(256 + ns * 256).to_string(), 8));
    out.extend(pad_field("", 44));
    out.extend(pad_field(&n_records.to_string(), 8));
    out.extend(pad_field(&format_header_float(record_duration_s), 8));
    out.extend(pad_field(&ns.to_string(), 4));

    for (h, _) in signals {
        out.extend(pad_field(&h.label, 16));
    }
    for _ in signals {
        out.extend(pad_field("", 80)); // transducer
    }
    for _ in signals {
        out.extend(pad_field("uV", 8));
    }
    for (h, _) in signals {
        out.extend(pad_field(&format_header_float(h.physical_min), 8));
    }
    for (h, _) in signals {
        out.extend(pad_field(&format_header_float(h.physical_max), 8));
    }
    for (h, _) in signals {
        out.extend(pad_field(&h.digital_min.to_string(), 8));
    }
    for (h, _) in signals {
        out.extend(pad_field(&h.digital_max.to_string(), 8));
    }
    for _ in signals {
        out.extend(pad_field("", 80)); // prefiltering
    }
    for (h, _) in signals {
        out.extend(pad_field(&h.samples_per_record.to_string(), 8));
    }
    for _ in signals {
        out.extend(pad_field("", 32)); // reserved
    }

    for r in 0..n_records {
        for (h, samples) in signals {
            let start = r * h.samples_per_record;
            for s in &samples[start..start + h.samples_per_record] {
                out.extend(s.to_le_bytes());
            }
        }
    }
    out
}

fn format_header_float(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e7 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_channel_file(samples: Vec<i16>) -> Vec<u8> {
        let header = SignalHeader {
            label: "EEG Fpz-Cz".into(),
            physical_min: -200.0,
            physical_max: 200.0,
            digital_min: -2048,
            digital_max: 2047,
            samples_per_record: samples.len(),
        };
        build_edf("S001 M", 1.0, 1, &[(header, samples)])
    }

    #[test]
    fn calibration_maps_digital_to_physical() {
        // Hand-computed from phys_min + (d - dig_min)*(phys_max - phys_min)/(dig_max - dig_min):
        //   d = -2048 -> -200.0
        //   d = 0     -> -200 + 2048*400/4095 = 0.04884004884004884...
        //   d = 2047  ->  200.0
        let rec = parse_edf(&one_channel_file(vec![-2048, 0, 2047])).unwrap();
        assert_eq!(rec.channels.len(), 1);
        let ch = &rec.channels[0];
        assert_eq!(ch.name, "EEG Fpz-Cz");
        assert!((ch.samples[0] - -200.0).abs() < 1e-12);
        assert!((ch.samples[1] - 0.048840048840048_f64).abs() < 1e-12);
        assert!((ch.samples[2] - 200.0).abs() < 1e-12);
        assert_eq!(rec.subject_id, "S001");
    }

    #[test]
    fn truncated_record_is_inconsistent() {
        let mut bytes = one_channel_file(vec![0, 1, 2, 3]);
        bytes.truncate(bytes.len() - 3);
        match parse_edf(&bytes) {
            Err(IngestError::InconsistentRecord { .. }) => {}
            other => panic!("expected InconsistentRecord, got {other:?}"),
        }
    }

    #[test]
    fn two_channel_truncation_detected() {
        let h = |label: &str, n: usize| SignalHeader {
            label: label.into(),
            physical_min: -100.0,
            physical_max: 100.0,
            digital_min: -32768,
            digital_max: 32767,
            samples_per_record: n,
        };
        let mut bytes = build_edf(
            "P",
            1.0,
            2,
            &[(h("A", 4), vec![0; 8]), (h("B", 4), vec![0; 8])],
        );
        bytes.truncate(bytes.len() - 8); // drop half of the last record
        assert!(matches!(
            parse_edf(&bytes),
            Err(IngestError::InconsistentRecord { .. })
        ));
    }

    #[test]
    fn zero_digital_range_rejected() {
        let header = SignalHeader {
            label: "X".into(),
            physical_min: 0.0,
            physical_max: 1.0,
            digital_min: 5,
            digital_max: 5,
            samples_per_record: 2,
        };
        let bytes = build_edf("P", 1.0, 1, &[(header, vec![5, 5])]);
        assert!(matches!(
            parse_edf(&bytes),
            Err(IngestError::ZeroDigitalRange { .. })
        ));
    }

    #[test]
    fn non_numeric_header_field_rejected() {
        let bytes = one_channel_file(vec![0, 0]);
        let mut corrupted = bytes.clone();
        corrupted[236..244].copy_from_slice(b"abc     "); // record count
        assert!(matches!(
            parse_edf(&corrupted),
            Err(IngestError::MalformedHeader(_))
        ));
    }

    #[test]
    fn non_ascii_tolerated_in_text_rejected_in_numeric() {
        let mut bytes = one_channel_file(vec![0, 0]);
        bytes[8] = 0xE9; // patient free-text field
        assert!(parse_edf(&bytes).is_ok());
        let mut bad = one_channel_file(vec![0, 0]);
        bad[237] = 0xE9; // record count numeric field
        assert!(matches!(
            parse_edf(&bad),
            Err(IngestError::MalformedHeader(_))
        ));
    }

    #[test]
    fn sample_rate_from_record_duration() {
        let header = SignalHeader {
            label: "EEG Fpz-Cz".into(),
            physical_min: -200.0,
            physical_max: 200.0,
            digital_min: -2048,
            digital_max: 2047,
            samples_per_record: 1000,
        };
        let bytes = build_edf("S", 10.0, 1, &[(header, vec![0; 1000])]);
        let rec = parse_edf(&bytes).unwrap();
        assert_eq!(rec.channels[0].sample_rate_hz, 100.0);
    }
}
