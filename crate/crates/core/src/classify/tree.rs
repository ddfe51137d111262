//! Regression trees for gradient boosting: exact greedy splits on sorted
//! feature values, second-order (gradient/hessian) leaf weights.

use serde::{Deserialize, Serialize};

/// Tree node; the layout is serialized into the versioned model document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        value: f64,
    },
}

impl TreeNode {
    pub fn predict(&self, features: &[f64]) -> f64 {
        match self {
            TreeNode::Leaf { value } => *value,
            TreeNode::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                if features[*feature] <= *threshold {
                    left.predict(features)
                } else {
                    right.predict(features)
                }
            }
        }
    }

    /// Count split occurrences per feature into `counts`.
    pub fn count_splits(&self, counts: &mut [usize]) {
        if let TreeNode::Split {
            feature,
            left,
            right,
            ..
        } = self
        {
            counts[*feature] += 1;
            left.count_splits(counts);
            right.count_splits(counts);
        }
    }

    pub fn internal_node_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => {
                1 + left.internal_node_count() + right.internal_node_count()
            }
        }
    }
}

pub struct TreeParams {
    pub max_depth: usize,
    pub min_leaf: usize,
    pub lambda: f64,
}

/// Fit a regression tree to (gradient, hessian) targets over the row subset
/// `rows`. Split search is deterministic: features in index order, a strictly
/// better gain required to replace the incumbent, thresholds at midpoints of
/// consecutive distinct values.
pub fn fit_tree(
    features: &[Vec<f64>],
    gradients: &[f64],
    hessians: &[f64],
    rows: &[usize],
    params: &TreeParams,
) -> TreeNode {
    let g_sum: f64 = rows.iter().map(|&r| gradients[r]).sum();
    let h_sum: f64 = rows.iter().map(|&r| hessians[r]).sum();

    if params.max_depth == 0 || rows.len() < 2 * params.min_leaf {
        return leaf(g_sum, h_sum, params.lambda);
    }

    let n_features = features.first().map_or(0, |f| f.len());
    let parent_score = g_sum * g_sum / (h_sum + params.lambda);
    let mut best: Option<(usize, f64, f64)> = None; // (feature, threshold, gain)

    let mut order: Vec<usize> = rows.to_vec();
    for feature in 0..n_features {
        order.sort_by(|&a, &b| features[a][feature].total_cmp(&features[b][feature]));
        let mut gl = 0.0;
        let mut hl = 0.0;
        for i in 0..order.len() - 1 {
            let r = order[i];
            gl += gradients[r];
            hl += hessians[r];
            let left_n = i + 1;
            let right_n = order.len() - left_n;
            if left_n < params.min_leaf || right_n < params.min_leaf {
                continue;
            }
            let v = features[r][feature];
            let v_next = features[order[i + 1]][feature];
            if v == v_next {
                continue;
            }
            let gr = g_sum - gl;
            let hr = h_sum - hl;
            let gain = gl * gl / (hl + params.lambda) + gr * gr / (hr + params.lambda)
                - parent_score;
            if gain > best.map_or(1e-12, |(_, _, g)| g) {
                best = Some((feature, (v + v_next) / 2.0, gain));
            }
        }
    }

    match best {
        None => leaf(g_sum, h_sum, params.lambda),
        Some((feature, threshold, _)) => {
            let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
                .iter()
                .partition(|&&r| features[r][feature] <= threshold);
            let child_params = TreeParams {
                max_depth: params.max_depth - 1,
                ..*params
            };
            TreeNode::Split {
                feature,
                threshold,
                left: Box::new(fit_tree(
                    features, gradients, hessians, &left_rows, &child_params,
                )),
                right: Box::new(fit_tree(
                    features, gradients, hessians, &right_rows, &child_params,
                )),
            }
        }
    }
}

fn leaf(g_sum: f64, h_sum: f64, lambda: f64) -> TreeNode {
    TreeNode::Leaf {
        value: -g_sum / (h_sum + lambda),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_split_separates_signs() {
        // Feature 0 below/above 0 with opposite gradients; hessians 1.
        let features: Vec<Vec<f64>> = (0..10)
            .map(|i| vec![if i < 5 { -1.0 } else { 1.0 }, 0.5])
            .collect();
        let gradients: Vec<f64> = (0..10).map(|i| if i < 5 { 1.0 } else { -1.0 }).collect();
        let hessians = vec![1.0; 10];
        let rows: Vec<usize> = (0..10).collect();
        let tree = fit_tree(
            &features,
            &gradients,
            &hessians,
            &rows,
            &TreeParams {
                max_depth: 2,
                min_leaf: 1,
                lambda: 0.0,
            },
        );
        assert_eq!(tree.internal_node_count(), 1);
        // Leaf values are Newton steps against the gradient: -sum(g)/sum(h).
        assert!(tree.predict(&[-1.0, 0.5]) < -0.9);
        assert!(tree.predict(&[1.0, 0.5]) > 0.9);
        let mut counts = vec![0usize; 2];
        tree.count_splits(&mut counts);
        assert_eq!(counts, vec![1, 0]);
    }

    #[test]
    fn min_leaf_respected() {
        let features: Vec<Vec<f64>> = (0..4).map(|i| vec![i as f64]).collect();
        let gradients = vec![1.0, 1.0, -1.0, -1.0];
        let hessians = vec![1.0; 4];
        let rows: Vec<usize> = (0..4).collect();
        let tree = fit_tree(
            &features,
            &gradients,
            &hessians,
            &rows,
            &TreeParams {
                max_depth: 3,
                min_leaf: 3,
                lambda: 0.0,
            },
        );
        assert_eq!(tree.internal_node_count(), 0);
    }
}
