//! CSV ingestion: tabular signal exports (one column per channel, one row per
//! sample tick), attention label columns, and phone activity logs.

use std::path::Path;

use chrono::{DateTime, Utc};

use super::error::IngestError;
use super::types::{
    ActivityCode, ActivityEntry, ActivitySeries, AttentionState, ChannelSeries, Recording,
    RecordingSource,
};

/// Column mapping for a signal CSV. When `channel_columns` is empty, every
/// header column except the label column is treated as a channel.
#[derive(Debug, Clone, Default)]
pub struct ColumnSchema {
    pub sample_rate_hz: f64,
    pub channel_columns: Vec<String>,
    pub label_column: Option<String>,
    pub subject_id: String,
}

fn header_index(headers: &csv::StringRecord, name: &str) -> Result<usize, IngestError> {
    headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| IngestError::MissingColumn(name.to_string()))
}

/// Load a signal CSV into a [`Recording`], one [`ChannelSeries`] per mapped
/// column. Row numbers in errors are 1-based data rows (the header is row 0).
pub fn load_signal_csv(path: &Path, schema: &ColumnSchema) -> Result<Recording, IngestError> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();

    let channel_names: Vec<String> = if schema.channel_columns.is_empty() {
        headers
            .iter()
            .filter(|h| Some(*h) != schema.label_column.as_deref())
            .map(|h| h.to_string())
            .collect()
    } else {
        schema.channel_columns.clone()
    };
    let indices: Vec<usize> = channel_names
        .iter()
        .map(|name| header_index(&headers, name))
        .collect::<Result<_, _>>()?;

    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); indices.len()];
    for (row_no, record) in reader.records().enumerate() {
        let record = record?;
        for (slot, &idx) in indices.iter().enumerate() {
            let cell = record.get(idx).unwrap_or("");
            let value: f64 = cell.trim().parse().map_err(|_| IngestError::NonNumericCell {
                row: row_no + 1,
                column: channel_names[slot].clone(),
                value: cell.to_string(),
            })?;
            columns[slot].push(value);
        }
    }

    let channels = channel_names
        .into_iter()
        .zip(columns)
        .map(|(name, samples)| ChannelSeries {
            name,
            sample_rate_hz: schema.sample_rate_hz,
            samples,
        })
        .collect();

    Ok(Recording {
        channels,
        start_time: DateTime::<Utc>::from_timestamp(0, 0).unwrap(),
        subject_id: schema.subject_id.clone(),
        source: RecordingSource::Csv,
    })
}

/// Map an attention label cell onto the binary state. The source data has
/// three states; "drowsy" merges into unfocused here.
pub fn map_attention_label(value: &str) -> Result<AttentionState, IngestError> {
    match value.trim().to_ascii_lowercase().as_str() {
        "focused" | "focus" | "0" => Ok(AttentionState::Focused),
        "unfocused" | "unfocus" | "drowsy" | "drowsed" | "1" | "2" => Ok(AttentionState::Unfocused),
        other => Err(IngestError::UnknownAttentionLabel(other.to_string())),
    }
}

/// Read the per-sample label column from a signal CSV.
pub fn load_attention_labels(
    path: &Path,
    label_column: &str,
) -> Result<Vec<AttentionState>, IngestError> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    let idx = header_index(&headers, label_column)?;
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record?;
        labels.push(map_attention_label(record.get(idx).unwrap_or(""))?);
    }
    Ok(labels)
}

/// Write a recording back to the internal signal CSV schema. Samples are
/// rendered with Rust's shortest round-trip float formatting, so re-loading
/// reproduces them bitwise.
pub fn write_signal_csv(recording: &Recording, path: &Path) -> Result<(), IngestError> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(recording.channels.iter().map(|c| c.name.as_str()))?;
    let rows = recording
        .channels
        .iter()
        .map(|c| c.samples.len())
        .min()
        .unwrap_or(0);
    for i in 0..rows {
        writer.write_record(
            recording
                .channels
                .iter()
                .map(|c| c.samples[i].to_string()),
        )?;
    }
    writer.flush()?;
    Ok(())
}

/// Load a phone activity log with columns `timestamp,activity` (unix seconds,
/// integer code 0-3). Timestamps must be strictly increasing. The subject id
/// is taken from the file stem.
pub fn load_activity_csv(path: &Path) -> Result<ActivitySeries, IngestError> {
    let subject_id = path
        .file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| "unknown".into());
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    let t_idx = header_index(&headers, "timestamp")?;
    let a_idx = header_index(&headers, "activity")?;

    let mut entries: Vec<ActivityEntry> = Vec::new();
    for (row_no, record) in reader.records().enumerate() {
        let record = record?;
        let row = row_no + 1;
        let t_cell = record.get(t_idx).unwrap_or("");
        let timestamp: i64 = t_cell.trim().parse().map_err(|_| IngestError::NonNumericCell {
            row,
            column: "timestamp".into(),
            value: t_cell.to_string(),
        })?;
        let a_cell = record.get(a_idx).unwrap_or("");
        let raw_code: i64 = a_cell.trim().parse().map_err(|_| IngestError::NonNumericCell {
            row,
            column: "activity".into(),
            value: a_cell.to_string(),
        })?;
        let code = ActivityCode::from_code(raw_code)
            .ok_or(IngestError::InvalidActivityCode { row, code: raw_code })?;
        if let Some(last) = entries.last() {
            if timestamp <= last.timestamp {
                return Err(IngestError::NonMonotonicTimestamps { row });
            }
        }
        entries.push(ActivityEntry { timestamp, code });
    }
    Ok(ActivitySeries {
        subject_id,
        entries,
    })
}
