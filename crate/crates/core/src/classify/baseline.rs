//! Majority-vote baseline: predicts the modal training label for every
//! sample.

use super::error::ClassifyError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MajorityBaseline {
    pub label: String,
}

impl MajorityBaseline {
    pub fn predict(&self) -> &str {
        &self.label
    }
}

/// Fit the constant classifier. Ties break toward the label that sorts first
/// (lowest class code for numeric stage labels).
pub fn majority_baseline(train_labels: &[String]) -> Result<MajorityBaseline, ClassifyError> {
    if train_labels.is_empty() {
        return Err(ClassifyError::EmptyTrain);
    }
    let mut counts: std::collections::BTreeMap<&str, usize> = Default::default();
    for l in train_labels {
        *counts.entry(l).or_insert(0) += 1;
    }
    let label = counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(l, _)| l.to_string())
        .unwrap();
    Ok(MajorityBaseline { label })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::metrics::{evaluate, Outcome};

    fn labels(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn modal_label_wins() {
        let model = majority_baseline(&labels(&["A", "A", "B"])).unwrap();
        assert_eq!(model.predict(), "A");
    }

    #[test]
    fn tie_breaks_to_lowest_code() {
        let model = majority_baseline(&labels(&["1", "0", "1", "0"])).unwrap();
        assert_eq!(model.predict(), "0");
    }

    #[test]
    fn empty_train_rejected() {
        assert!(matches!(
            majority_baseline(&[]),
            Err(ClassifyError::EmptyTrain)
        ));
    }

    #[test]
    fn accuracy_equals_modal_test_frequency() {
        let train = labels(&["x", "x", "y"]);
        let test = labels(&["x", "y", "y", "x", "x", "y", "x"]);
        let model = majority_baseline(&train).unwrap();
        let preds: Vec<Outcome> = test
            .iter()
            .map(|_| Outcome::Label(model.predict().to_string()))
            .collect();
        let report = evaluate(&preds, &test).unwrap();
        let modal_freq = test.iter().filter(|l| l.as_str() == "x").count() as f64
            / test.len() as f64;
        assert_eq!(report.accuracy, modal_freq);
    }
}
