//! Multiclass gradient boosting: one-vs-all softmax, K regression trees per
//! round fit to the softmax gradient, early stopping on validation log-loss.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::error::ClassifyError;
use super::tree::{fit_tree, TreeNode, TreeParams};
use crate::dsp::FeatureMatrix;

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GbtParams {
    pub n_rounds: usize,
    pub max_depth: usize,
    pub learning_rate: f64,
    pub min_leaf: usize,
    /// Rounds without validation log-loss improvement before stopping.
    pub early_stop_rounds: usize,
}

impl Default for GbtParams {
    fn default() -> Self {
        Self {
            n_rounds: 200,
            max_depth: 4,
            learning_rate: 0.1,
            min_leaf: 5,
            early_stop_rounds: 10,
        }
    }
}

/// Trained model: `trees[class][round]`, leaf values already scaled by the
/// learning rate. Serialized as a versioned JSON document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GbtModel {
    pub version: u32,
    pub learning_rate: f64,
    pub n_rounds: usize,
    pub feature_names: Vec<String>,
    pub labels: Vec<String>,
    pub trees: Vec<Vec<TreeNode>>,
}

/// Per-round losses recorded during training.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct TrainingHistory {
    pub train_log_loss: Vec<f64>,
    pub validation_log_loss: Vec<f64>,
    pub best_round: usize,
}

fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.iter().map(|e| e / sum).collect()
}

fn log_loss(scores: &[Vec<f64>], class_ids: &[usize]) -> f64 {
    let mut total = 0.0;
    for (row, &c) in scores.iter().zip(class_ids) {
        let p = softmax(row);
        total -= p[c].max(1e-300).ln();
    }
    total / class_ids.len() as f64
}

fn to_class_ids(labels: &[String], classes: &[String]) -> Result<Vec<usize>, ClassifyError> {
    labels
        .iter()
        .map(|l| {
            classes
                .iter()
                .position(|c| c == l)
                .ok_or_else(|| ClassifyError::UnknownLabel(l.clone()))
        })
        .collect()
}

/// Train on a feature matrix with an optional validation matrix for early
/// stopping. Classes are ordered by first appearance in the training labels;
/// training is deterministic (ties in the split search break toward the
/// lowest feature index and threshold).
pub fn train_gbt(
    train: &FeatureMatrix,
    validation: Option<&FeatureMatrix>,
    params: &GbtParams,
) -> Result<(GbtModel, TrainingHistory), ClassifyError> {
    if train.rows.is_empty() {
        return Err(ClassifyError::EmptyTrain);
    }
    for row in train.rows.iter().chain(validation.iter().flat_map(|m| m.rows.iter())) {
        if row.values.iter().any(|v| !v.is_finite()) {
            return Err(ClassifyError::NonFiniteFeature {
                epoch_index: row.epoch_index,
            });
        }
    }
    let classes = train.label_set();
    if classes.len() < 2 {
        return Err(ClassifyError::SingleClassTrain);
    }
    let k = classes.len();
    let y = to_class_ids(&train.labels(), &classes)?;
    let x: Vec<Vec<f64>> = train.rows.iter().map(|r| r.values.clone()).collect();
    let n = x.len();

    let val = match validation {
        Some(m) if !m.rows.is_empty() => {
            let vy = to_class_ids(&m.labels(), &classes)?;
            let vx: Vec<Vec<f64>> = m.rows.iter().map(|r| r.values.clone()).collect();
            Some((vx, vy))
        }
        _ => None,
    };

    let tree_params = TreeParams {
        max_depth: params.max_depth,
        min_leaf: params.min_leaf,
        lambda: 1e-6,
    };
    let rows: Vec<usize> = (0..n).collect();

    let mut scores = vec![vec![0.0f64; k]; n];
    let mut val_scores = val.as_ref().map(|(vx, _)| vec![vec![0.0f64; k]; vx.len()]);
    let mut trees: Vec<Vec<TreeNode>> = vec![Vec::new(); k];
    let mut history = TrainingHistory::default();
    let mut best_val = f64::INFINITY;
    let mut best_round = 0usize;
    let mut stale = 0usize;

    for round in 0..params.n_rounds {
        let probs: Vec<Vec<f64>> = scores.iter().map(|s| softmax(s)).collect();
        for class in 0..k {
            let gradients: Vec<f64> = (0..n)
                .map(|i| probs[i][class] - if y[i] == class { 1.0 } else { 0.0 })
                .collect();
            let hessians: Vec<f64> = (0..n)
                .map(|i| (probs[i][class] * (1.0 - probs[i][class])).max(1e-12))
                .collect();
            let mut tree = fit_tree(&x, &gradients, &hessians, &rows, &tree_params);
            scale_leaves(&mut tree, params.learning_rate);
            for (i, s) in scores.iter_mut().enumerate() {
                s[class] += tree.predict(&x[i]);
            }
            if let (Some(vs), Some((vx, _))) = (val_scores.as_mut(), val.as_ref()) {
                for (i, s) in vs.iter_mut().enumerate() {
                    s[class] += tree.predict(&vx[i]);
                }
            }
            trees[class].push(tree);
        }

        history.train_log_loss.push(log_loss(&scores, &y));
        if let (Some(vs), Some((_, vy))) = (val_scores.as_ref(), val.as_ref()) {
            let vl = log_loss(vs, vy);
            history.validation_log_loss.push(vl);
            if vl < best_val - 1e-12 {
                best_val = vl;
                best_round = round;
                stale = 0;
            } else {
                stale += 1;
                if stale >= params.early_stop_rounds {
                    break;
                }
            }
        } else {
            best_round = round;
        }
    }

    // Truncate to the best validation round.
    let keep = best_round + 1;
    for class_trees in &mut trees {
        class_trees.truncate(keep);
    }
    history.best_round = best_round;

    Ok((
        GbtModel {
            version: MODEL_FORMAT_VERSION,
            learning_rate: params.learning_rate,
            n_rounds: keep,
            feature_names: train.feature_names.clone(),
            labels: classes,
            trees,
        },
        history,
    ))
}

fn scale_leaves(tree: &mut TreeNode, factor: f64) {
    match tree {
        TreeNode::Leaf { value } => *value *= factor,
        TreeNode::Split { left, right, .. } => {
            scale_leaves(left, factor);
            scale_leaves(right, factor);
        }
    }
}

/// Predict one row: softmax over summed per-class tree outputs. Ties break
/// toward the lowest class index; a zero-round model yields uniform
/// probabilities and class 0.
pub fn predict(model: &GbtModel, features: &[f64]) -> Result<(String, Vec<f64>), ClassifyError> {
    if features.len() != model.feature_names.len() {
        return Err(ClassifyError::DimensionMismatch {
            expected: model.feature_names.len(),
            actual: features.len(),
        });
    }
    let scores: Vec<f64> = model
        .trees
        .iter()
        .map(|class_trees| class_trees.iter().map(|t| t.predict(features)).sum())
        .collect();
    let probs = softmax(&scores);
    let mut best = 0usize;
    for (i, &p) in probs.iter().enumerate() {
        if p > probs[best] {
            best = i;
        }
    }
    Ok((model.labels[best].clone(), probs))
}

/// Split-occurrence counts per feature across every tree in the ensemble.
/// Features never used are present with count 0.
pub fn feature_importance(model: &GbtModel) -> BTreeMap<String, usize> {
    let mut counts = vec![0usize; model.feature_names.len()];
    for class_trees in &model.trees {
        for tree in class_trees {
            tree.count_splits(&mut counts);
        }
    }
    model
        .feature_names
        .iter()
        .cloned()
        .zip(counts)
        .collect()
}

/// Total internal (split) nodes across the ensemble.
pub fn internal_node_count(model: &GbtModel) -> usize {
    model
        .trees
        .iter()
        .flatten()
        .map(|t| t.internal_node_count())
        .sum()
}

pub fn save_model(model: &GbtModel, path: &std::path::Path) -> Result<(), ClassifyError> {
    let json = serde_json::to_string_pretty(model)?;
    std::fs::write(path, json)?;
    Ok(())
}

pub fn load_model(path: &std::path::Path) -> Result<GbtModel, ClassifyError> {
    let json = std::fs::read_to_string(path)?;
    let model: GbtModel = serde_json::from_str(&json)?;
    if model.version != MODEL_FORMAT_VERSION {
        return Err(ClassifyError::UnsupportedModelVersion(model.version));
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsp::FeatureRow;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn matrix(rows: Vec<(Vec<f64>, &str)>) -> FeatureMatrix {
        FeatureMatrix {
            feature_names: (0..rows[0].0.len()).map(|i| format!("f{i}")).collect(),
            rows: rows
                .into_iter()
                .enumerate()
                .map(|(i, (values, label))| FeatureRow {
                    values,
                    label: label.into(),
                    subject_id: "s".into(),
                    epoch_index: i,
                })
                .collect(),
        }
    }

    /// Four Gaussian clusters at (+-1, +-1); label = XOR of the signs.
    pub(crate) fn xor_dataset(n: usize, seed: u64) -> FeatureMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let cx = if i % 2 == 0 { 1.0 } else { -1.0 };
            let cy = if (i / 2) % 2 == 0 { 1.0 } else { -1.0 };
            let x = cx + 0.2 * (rng.random::<f64>() - 0.5);
            let y = cy + 0.2 * (rng.random::<f64>() - 0.5);
            let label = if (cx > 0.0) != (cy > 0.0) { "one" } else { "zero" };
            rows.push((vec![x, y], label));
        }
        matrix(rows)
    }

    #[test]
    fn xor_is_learned_at_depth_two() {
        let train = xor_dataset(400, 11);
        let params = GbtParams {
            n_rounds: 50,
            max_depth: 2,
            learning_rate: 0.1,
            min_leaf: 5,
            early_stop_rounds: 10,
        };
        let (model, history) = train_gbt(&train, None, &params).unwrap();
        let correct = train
            .rows
            .iter()
            .filter(|r| predict(&model, &r.values).unwrap().0 == r.label)
            .count();
        let acc = correct as f64 / train.rows.len() as f64;
        assert!(acc >= 0.99, "XOR training accuracy {acc}");
        // Train log-loss never increases.
        for w in history.train_log_loss.windows(2) {
            assert!(w[1] <= w[0] + 1e-9, "loss increased: {} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn separable_blobs_validate_cleanly() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut make = |n: usize| -> FeatureMatrix {
            matrix(
                (0..n)
                    .map(|i| {
                        let c = if i % 2 == 0 { 3.0 } else { -3.0 };
                        let label = if i % 2 == 0 { "pos" } else { "neg" };
                        (
                            vec![c + rng.random::<f64>(), c + rng.random::<f64>()],
                            label,
                        )
                    })
                    .collect(),
            )
        };
        let train = make(200);
        let val = make(100);
        let (model, _) = train_gbt(&train, Some(&val), &GbtParams::default()).unwrap();
        let correct = val
            .rows
            .iter()
            .filter(|r| predict(&model, &r.values).unwrap().0 == r.label)
            .count();
        assert!(correct as f64 / val.rows.len() as f64 >= 0.99);
    }

    #[test]
    fn single_class_rejected() {
        let train = matrix(vec![(vec![1.0], "a"), (vec![2.0], "a")]);
        assert!(matches!(
            train_gbt(&train, None, &GbtParams::default()),
            Err(ClassifyError::SingleClassTrain)
        ));
    }

    #[test]
    fn non_finite_feature_rejected() {
        let train = matrix(vec![(vec![1.0], "a"), (vec![f64::NAN], "b")]);
        assert!(matches!(
            train_gbt(&train, None, &GbtParams::default()),
            Err(ClassifyError::NonFiniteFeature { .. })
        ));
    }

    #[test]
    fn zero_round_model_is_uniform() {
        let model = GbtModel {
            version: MODEL_FORMAT_VERSION,
            learning_rate: 0.1,
            n_rounds: 0,
            feature_names: vec!["f0".into()],
            labels: vec!["a".into(), "b".into(), "c".into()],
            trees: vec![Vec::new(), Vec::new(), Vec::new()],
        };
        let (label, probs) = predict(&model, &[0.5]).unwrap();
        assert_eq!(label, "a");
        for p in &probs {
            assert!((p - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn probabilities_sum_to_one() {
        let train = xor_dataset(100, 5);
        let (model, _) = train_gbt(
            &train,
            None,
            &GbtParams {
                n_rounds: 10,
                ..GbtParams::default()
            },
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let fv = vec![rng.random::<f64>() * 4.0 - 2.0, rng.random::<f64>() * 4.0 - 2.0];
            let (_, probs) = predict(&model, &fv).unwrap();
            assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let train = xor_dataset(50, 1);
        let (model, _) = train_gbt(
            &train,
            None,
            &GbtParams {
                n_rounds: 2,
                ..GbtParams::default()
            },
        )
        .unwrap();
        assert!(matches!(
            predict(&model, &[1.0]),
            Err(ClassifyError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn importance_counts_sum_to_internal_nodes() {
        let train = xor_dataset(200, 9);
        let (model, _) = train_gbt(
            &train,
            None,
            &GbtParams {
                n_rounds: 20,
                ..GbtParams::default()
            },
        )
        .unwrap();
        let importance = feature_importance(&model);
        assert_eq!(importance.len(), 2);
        let total: usize = importance.values().sum();
        assert_eq!(total, internal_node_count(&model));
        assert!(total > 0);
    }

    #[test]
    fn stump_on_one_feature_counts_only_it() {
        // Only feature 1 is informative; depth-1 stumps must all split on it.
        let rows: Vec<(Vec<f64>, &str)> = (0..40)
            .map(|i| {
                let v = if i % 2 == 0 { 1.0 } else { -1.0 };
                let label = if i % 2 == 0 { "a" } else { "b" };
                (vec![0.0, v, 0.0], label)
            })
            .collect();
        let train = matrix(rows);
        let (model, _) = train_gbt(
            &train,
            None,
            &GbtParams {
                n_rounds: 10,
                max_depth: 1,
                learning_rate: 0.5,
                min_leaf: 1,
                early_stop_rounds: 10,
            },
        )
        .unwrap();
        let importance = feature_importance(&model);
        assert_eq!(importance["f0"], 0);
        assert_eq!(importance["f2"], 0);
        assert_eq!(importance["f1"], internal_node_count(&model));
        // 2 classes x 10 rounds, one split each.
        assert_eq!(importance["f1"], 20);
    }

    #[test]
    fn model_json_round_trip() {
        let train = xor_dataset(100, 17);
        let (model, _) = train_gbt(
            &train,
            None,
            &GbtParams {
                n_rounds: 5,
                ..GbtParams::default()
            },
        )
        .unwrap();
        let file = tempfile::NamedTempFile::new().unwrap();
        save_model(&model, file.path()).unwrap();
        let loaded = load_model(file.path()).unwrap();
        assert_eq!(loaded.labels, model.labels);
        assert_eq!(loaded.n_rounds, model.n_rounds);
        for r in &train.rows {
            assert_eq!(
                predict(&loaded, &r.values).unwrap().0,
                predict(&model, &r.values).unwrap().0
            );
        }
    }

    #[test]
    fn rank_transform_preserves_argmax_on_xor() {
        // Trees split on order statistics, so training on rank-transformed
        // features must reproduce the same test-label sequence.
        let train = xor_dataset(200, 21);
        let params = GbtParams {
            n_rounds: 30,
            max_depth: 2,
            learning_rate: 0.1,
            min_leaf: 5,
            early_stop_rounds: 10,
        };
        let rank_transform = |m: &FeatureMatrix| -> FeatureMatrix {
            let mut out = m.clone();
            for feature in 0..m.feature_names.len() {
                let mut order: Vec<usize> = (0..m.rows.len()).collect();
                order.sort_by(|&a, &b| {
                    m.rows[a].values[feature].total_cmp(&m.rows[b].values[feature])
                });
                for (rank, &row) in order.iter().enumerate() {
                    out.rows[row].values[feature] = rank as f64;
                }
            }
            out
        };
        let ranked = rank_transform(&train);
        let (model_raw, _) = train_gbt(&train, None, &params).unwrap();
        let (model_ranked, _) = train_gbt(&ranked, None, &params).unwrap();
        let labels_raw: Vec<String> = train
            .rows
            .iter()
            .map(|r| predict(&model_raw, &r.values).unwrap().0)
            .collect();
        let labels_ranked: Vec<String> = ranked
            .rows
            .iter()
            .map(|r| predict(&model_ranked, &r.values).unwrap().0)
            .collect();
        assert_eq!(labels_raw, labels_ranked);
    }
}
