//! Random forest: bootstrapped class-weighted trees with per-split feature
//! subsampling.

use cardioscope_rng::SplitMix64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::tree::{fit_decision_tree, grow_tree, ClassWeights, DecisionTree, TreeParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_estimators: usize,
    pub max_depth: usize,
    pub max_leaf_nodes: usize,
    pub class_weights: ClassWeights,
    /// Features drawn per split; None uses all (and sqrt(d) is the preset).
    pub features_per_split: Option<usize>,
    /// Disabled only by the single-tree test mode.
    pub bootstrap: bool,
    pub seed: u64,
}

impl ForestParams {
    /// sqrt of the feature count, the usual forest default.
    pub fn sqrt_features(d: usize) -> usize {
        (d as f64).sqrt().round() as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub trees: Vec<DecisionTree>,
}

/// Fit `n_estimators` trees, each on a bootstrap resample with per-split
/// feature sampling. Per-tree seeds derive from the run seed and the tree
/// index, so results are identical for any thread count.
pub fn fit_random_forest(x: &[Vec<f64>], y: &[bool], params: &ForestParams) -> Result<ForestModel, ModelError> {
    if x.is_empty() || x.len() != y.len() {
        return Err(ModelError::DegenerateData("empty training set or length mismatch".into()));
    }
    if params.n_estimators == 0 {
        return Err(ModelError::InvalidConfig("n_estimators must be positive".into()));
    }
    let tree_params = TreeParams {
        max_depth: params.max_depth,
        max_leaf_nodes: params.max_leaf_nodes,
        class_weights: params.class_weights,
    };
    let trees: Vec<DecisionTree> = (0..params.n_estimators)
        .into_par_iter()
        .map(|t| {
            let mut rng = SplitMix64::derive(params.seed, t as u64);
            let idx: Vec<usize> = if params.bootstrap {
                (0..x.len()).map(|_| rng.below(x.len())).collect()
            } else {
                (0..x.len()).collect()
            };
            let root = match params.features_per_split {
                Some(k) => grow_tree(x, y, idx, &tree_params, Some((k, &mut rng))),
                None => grow_tree(x, y, idx, &tree_params, None),
            };
            DecisionTree { root, params: tree_params.clone() }
        })
        .collect();
    Ok(ForestModel { trees })
}

impl ForestModel {
    /// Mean of the per-tree Abnormal probabilities.
    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        self.trees.iter().map(|t| t.predict_proba(x)).sum::<f64>() / self.trees.len() as f64
    }

    pub fn predict(&self, x: &[f64]) -> bool {
        self.predict_proba(x) >= 0.5
    }
}

/// Single decision tree fit with the forest's tree parameters; the
/// test-mode equivalence target for a one-tree, no-bootstrap forest.
pub fn single_tree_reference(x: &[Vec<f64>], y: &[bool], params: &ForestParams) -> Result<DecisionTree, ModelError> {
    let tree_params = TreeParams {
        max_depth: params.max_depth,
        max_leaf_nodes: params.max_leaf_nodes,
        class_weights: params.class_weights,
    };
    fit_decision_tree(x, y, &tree_params)
}
