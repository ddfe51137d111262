//! Classification: native gradient-boosted trees, the majority baseline, and
//! the evaluation metrics used in the result tables.

pub mod baseline;
mod error;
pub mod gbt;
pub mod metrics;
pub mod tree;

pub use baseline::{majority_baseline, MajorityBaseline};
pub use error::ClassifyError;
pub use gbt::{
    feature_importance, internal_node_count, load_model, predict, save_model, train_gbt, GbtModel,
    GbtParams, TrainingHistory,
};
pub use metrics::{
    evaluate, evaluate_with_labels, report_table, ConfusionMatrix, EvalReport, Outcome,
};
pub use tree::TreeNode;
