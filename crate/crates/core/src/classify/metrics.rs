//! Evaluation metrics: accuracy, weighted F1, confusion matrix, refusal rate.

use serde::{Deserialize, Serialize};

use super::error::ClassifyError;

/// One model response for a test sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Label(String),
    /// The model declined the task ("cannot assist"). Excluded from accuracy
    /// and F1 denominators, counted in the refusal rate.
    Refusal,
    /// No label could be extracted and no refusal pattern matched.
    Unparseable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    /// `counts[truth][predicted]`.
    pub counts: Vec<Vec<usize>>,
    pub labels: Vec<String>,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> usize {
        (0..self.labels.len()).map(|i| self.counts[i][i]).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub accuracy: f64,
    pub weighted_f1: f64,
    pub confusion: ConfusionMatrix,
    /// Refusals over all attempts.
    pub refusal_rate: f64,
    /// Total attempts (classified + refused + unparseable).
    pub n_samples: usize,
    pub n_classified: usize,
    pub n_refusals: usize,
    pub n_unparseable: usize,
}

/// Score predictions against ground truth with the class list inferred from
/// the data (sorted union of truth and predicted labels).
pub fn evaluate(predictions: &[Outcome], truth: &[String]) -> Result<EvalReport, ClassifyError> {
    let mut labels: Vec<String> = truth.to_vec();
    for p in predictions {
        if let Outcome::Label(l) = p {
            labels.push(l.clone());
        }
    }
    labels.sort();
    labels.dedup();
    evaluate_with_labels(predictions, truth, &labels)
}

/// Score predictions against ground truth over an explicit ordered class
/// list. Weighted F1 = sum_c (support_c / n_classified) * F1_c, with
/// F1_c = 0 when precision or recall is undefined.
pub fn evaluate_with_labels(
    predictions: &[Outcome],
    truth: &[String],
    labels: &[String],
) -> Result<EvalReport, ClassifyError> {
    if predictions.len() != truth.len() {
        return Err(ClassifyError::LengthMismatch {
            predictions: predictions.len(),
            truth: truth.len(),
        });
    }
    let index_of = |label: &str| -> Result<usize, ClassifyError> {
        labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| ClassifyError::UnknownLabel(label.to_string()))
    };

    let k = labels.len();
    let mut counts = vec![vec![0usize; k]; k];
    let mut n_refusals = 0usize;
    let mut n_unparseable = 0usize;
    for (pred, t) in predictions.iter().zip(truth) {
        match pred {
            Outcome::Refusal => n_refusals += 1,
            Outcome::Unparseable => n_unparseable += 1,
            Outcome::Label(l) => counts[index_of(t)?][index_of(l)?] += 1,
        }
    }

    let confusion = ConfusionMatrix {
        counts,
        labels: labels.to_vec(),
    };
    let n_classified = confusion.total();
    let accuracy = if n_classified == 0 {
        0.0
    } else {
        confusion.trace() as f64 / n_classified as f64
    };

    let mut weighted_f1 = 0.0;
    if n_classified > 0 {
        for c in 0..k {
            let support: usize = confusion.counts[c].iter().sum();
            if support == 0 {
                continue;
            }
            let tp = confusion.counts[c][c];
            let predicted: usize = (0..k).map(|t| confusion.counts[t][c]).sum();
            let f1 = if predicted == 0 || tp == 0 {
                0.0
            } else {
                let precision = tp as f64 / predicted as f64;
                let recall = tp as f64 / support as f64;
                2.0 * precision * recall / (precision + recall)
            };
            weighted_f1 += support as f64 / n_classified as f64 * f1;
        }
    }

    let n_samples = predictions.len();
    Ok(EvalReport {
        accuracy,
        weighted_f1,
        confusion,
        refusal_rate: if n_samples == 0 {
            0.0
        } else {
            n_refusals as f64 / n_samples as f64
        },
        n_samples,
        n_classified,
        n_refusals,
        n_unparseable,
    })
}

/// Render the report as an aligned-column text table row set
/// (`Models | acc | F1 | note`).
pub fn report_table(rows: &[(String, Option<EvalReport>)]) -> String {
    let mut lines = Vec::new();
    let name_width = rows
        .iter()
        .map(|(n, _)| n.len())
        .chain(std::iter::once("Models".len()))
        .max()
        .unwrap_or(6);
    lines.push(format!(
        "{:<name_width$}  {:>5}  {:>5}  note",
        "Models", "acc", "F1"
    ));
    for (name, report) in rows {
        match report {
            Some(r) => {
                let note = if r.n_refusals > 0 {
                    format!("{:.0}% \"cannot assist\"", r.refusal_rate * 100.0)
                } else {
                    String::new()
                };
                lines.push(format!(
                    "{:<name_width$}  {:>5.1}  {:>5.2}  {}",
                    name,
                    r.accuracy * 100.0,
                    r.weighted_f1,
                    note
                ));
            }
            None => lines.push(format!("{:<name_width$}  {:>5}  {:>5}  ", name, "-", "-")),
        }
    }
    lines.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn outcomes(v: &[&str]) -> Vec<Outcome> {
        v.iter().map(|s| Outcome::Label(s.to_string())).collect()
    }

    #[test]
    fn perfect_predictions() {
        let truth = labels(&["a", "b", "a"]);
        let report = evaluate(&outcomes(&["a", "b", "a"]), &truth).unwrap();
        assert_eq!(report.accuracy, 1.0);
        assert_eq!(report.weighted_f1, 1.0);
        assert_eq!(report.refusal_rate, 0.0);
    }

    #[test]
    fn hand_derived_weighted_f1() {
        // truth [A,A,B,B] vs predicted [A,B,B,B]:
        //   A: P=1, R=1/2, F1=2/3;  B: P=2/3, R=1, F1=4/5
        //   weighted = 0.5*(2/3) + 0.5*(4/5) = 11/15 = 0.7333...
        let truth = labels(&["A", "A", "B", "B"]);
        let report = evaluate(&outcomes(&["A", "B", "B", "B"]), &truth).unwrap();
        assert!((report.accuracy - 0.75).abs() < 1e-12);
        assert!((report.weighted_f1 - 11.0 / 15.0).abs() < 1e-9);
    }

    #[test]
    fn refusals_excluded_from_accuracy() {
        let truth = labels(&["a", "a", "a", "a"]);
        let preds = vec![
            Outcome::Label("a".into()),
            Outcome::Label("a".into()),
            Outcome::Label("a".into()),
            Outcome::Refusal,
        ];
        let report = evaluate(&preds, &truth).unwrap();
        assert_eq!(report.accuracy, 1.0);
        assert_eq!(report.refusal_rate, 0.25);
        assert_eq!(report.n_classified, 3);
        assert_eq!(report.confusion.total(), 3);
    }

    #[test]
    fn unparseable_tracked_separately() {
        let truth = labels(&["a", "b"]);
        let preds = vec![Outcome::Unparseable, Outcome::Label("b".into())];
        let report = evaluate(&preds, &truth).unwrap();
        assert_eq!(report.n_unparseable, 1);
        assert_eq!(report.refusal_rate, 0.0);
        assert_eq!(report.n_classified, 1);
    }

    #[test]
    fn length_mismatch_rejected() {
        let truth = labels(&["a"]);
        assert!(matches!(
            evaluate(&outcomes(&["a", "a"]), &truth),
            Err(ClassifyError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn explicit_label_order_respected() {
        let truth = labels(&["W", "REM"]);
        let order = labels(&["W", "1", "2", "3&4", "REM"]);
        let report =
            evaluate_with_labels(&outcomes(&["REM", "REM"]), &truth, &order).unwrap();
        assert_eq!(report.confusion.labels, order);
        assert_eq!(report.confusion.counts[0][4], 1);
        assert_eq!(report.confusion.counts[4][4], 1);
    }
}
