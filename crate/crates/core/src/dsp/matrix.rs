//! Feature matrices: one row per epoch, `<channel>_<feature>` columns plus
//! `label`, `subject_id`, and `epoch_index`, exported as UTF-8 CSV with
//! deterministic column ordering.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::error::DspError;
use super::features::extract_features;
use crate::ingest::Epoch;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub values: Vec<f64>,
    pub label: String,
    pub subject_id: String,
    pub epoch_index: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FeatureMatrix {
    pub feature_names: Vec<String>,
    pub rows: Vec<FeatureRow>,
}

impl FeatureMatrix {
    pub fn labels(&self) -> Vec<String> {
        self.rows.iter().map(|r| r.label.clone()).collect()
    }

    /// Distinct labels in first-appearance order.
    pub fn label_set(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.label) {
                out.push(r.label.clone());
            }
        }
        out
    }
}

/// Extract features for every epoch in parallel. Epochs flagged excluded are
/// skipped; channel order follows the epoch, feature order is canonical.
pub fn extract_feature_matrix(epochs: &[Epoch]) -> Result<FeatureMatrix, DspError> {
    let kept: Vec<&Epoch> = epochs.iter().filter(|e| !e.excluded).collect();
    let vectors = kept
        .par_iter()
        .map(|e| extract_features(e))
        .collect::<Result<Vec<_>, _>>()?;

    let feature_names = vectors
        .first()
        .map(|fv| fv.flat_names())
        .unwrap_or_default();
    let rows = kept
        .iter()
        .zip(vectors)
        .map(|(e, fv)| FeatureRow {
            values: fv.flat_values(),
            label: e.label.canonical(),
            subject_id: e.subject_id.clone(),
            epoch_index: e.index,
        })
        .collect();
    Ok(FeatureMatrix {
        feature_names,
        rows,
    })
}

pub fn write_feature_csv(matrix: &FeatureMatrix, path: &Path) -> Result<(), std::io::Error> {
    let mut writer = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = matrix.feature_names.clone();
    header.extend(["label".into(), "subject_id".into(), "epoch_index".into()]);
    writer.write_record(&header)?;
    for row in &matrix.rows {
        let mut record: Vec<String> = row.values.iter().map(|v| v.to_string()).collect();
        record.push(row.label.clone());
        record.push(row.subject_id.clone());
        record.push(row.epoch_index.to_string());
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_feature_csv(path: &Path) -> Result<FeatureMatrix, std::io::Error> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    let n = headers.len();
    if n < 4 {
        return Err(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            "feature CSV needs at least one feature column plus label, subject_id, epoch_index",
        ));
    }
    let feature_names: Vec<String> = headers.iter().take(n - 3).map(String::from).collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(std::io::Error::other)?;
        let values = (0..n - 3)
            .map(|i| {
                record[i].parse::<f64>().map_err(|_| {
                    std::io::Error::new(
                        std::io::ErrorKind::InvalidData,
                        format!("non-numeric feature cell {:?}", &record[i]),
                    )
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(FeatureRow {
            values,
            label: record[n - 3].to_string(),
            subject_id: record[n - 2].to_string(),
            epoch_index: record[n - 1].parse().unwrap_or(0),
        });
    }
    Ok(FeatureMatrix {
        feature_names,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{AttentionState, Epoch, EpochChannel, EpochLabel};

    fn epoch(i: usize, focused: bool) -> Epoch {
        let state = if focused {
            AttentionState::Focused
        } else {
            AttentionState::Unfocused
        };
        Epoch {
            channels: vec![
                EpochChannel {
                    name: "AF3".into(),
                    sample_rate_hz: 128.0,
                    samples: (0..1280).map(|j| ((i + j) as f64 * 0.1).sin()).collect(),
                },
                EpochChannel {
                    name: "AF4".into(),
                    sample_rate_hz: 128.0,
                    samples: (0..1280).map(|j| ((i * j) as f64 * 0.01).cos()).collect(),
                },
            ],
            length_s: 10.0,
            label: EpochLabel::Attention(state),
            subject_id: "s1".into(),
            index: i,
            excluded: false,
        }
    }

    #[test]
    fn matrix_columns_are_channel_by_feature() {
        let epochs = vec![epoch(0, true), epoch(1, false)];
        let m = extract_feature_matrix(&epochs).unwrap();
        assert_eq!(m.feature_names.len(), 22);
        assert_eq!(m.feature_names[0], "AF3_delta_pow");
        assert_eq!(m.feature_names[11], "AF4_delta_pow");
        assert_eq!(m.feature_names[21], "AF4_p90_amplitude");
        assert_eq!(m.rows[0].label, "focused");
        assert_eq!(m.rows[1].label, "unfocused");
    }

    #[test]
    fn csv_round_trip_preserves_values() {
        let epochs = vec![epoch(0, true), epoch(1, false), epoch(2, true)];
        let m = extract_feature_matrix(&epochs).unwrap();
        let f = tempfile::NamedTempFile::new().unwrap();
        write_feature_csv(&m, f.path()).unwrap();
        let back = read_feature_csv(f.path()).unwrap();
        assert_eq!(back, m);
    }
}
