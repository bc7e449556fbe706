//! Baseline pruning classifiers: a CART decision tree (Gini impurity,
//! midpoint thresholds) and a random forest of such trees with bootstrap
//! resampling and per-split feature subsampling. Both share the SVM's
//! training-set type and label conventions (ties resolve to +1).

mod forest;
mod tree;

pub use forest::{train_forest, FeaturesPerSplit, ForestConfig, RandomForestModel};
pub use tree::{train_tree, DecisionTreeModel, TreeConfig};
