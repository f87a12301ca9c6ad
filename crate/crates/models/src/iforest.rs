//! Isolation forest: random-split trees whose expected path length grades
//! abnormality.

use cardioscope_rng::SplitMix64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::ModelError;

pub const EULER_MASCHERONI: f64 = 0.5772156649;

/// Expected unsuccessful-search path length of a BST with m points;
/// normalizes path lengths and pads truncated leaves.
pub fn average_path_length(m: usize) -> f64 {
    match m {
        0 | 1 => 0.0,
        2 => 1.0,
        _ => 2.0 * (((m - 1) as f64).ln() + EULER_MASCHERONI) - 2.0 * (m - 1) as f64 / m as f64,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IForestParams {
    pub n_trees: usize,
    /// Subsample size per tree.
    pub psi: usize,
    pub seed: u64,
}

impl Default for IForestParams {
    fn default() -> Self {
        IForestParams { n_trees: 100, psi: 256, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum IsoNode {
    Leaf { size: usize },
    Split { feature: usize, threshold: f64, left: Box<IsoNode>, right: Box<IsoNode> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsolationForestModel {
    pub trees: Vec<IsoNode>,
    /// Subsample size actually used (min(psi, n)).
    pub psi_used: usize,
}

fn grow(x: &[Vec<f64>], idx: &[usize], depth: usize, limit: usize, rng: &mut SplitMix64) -> IsoNode {
    if idx.len() <= 1 || depth >= limit {
        return IsoNode::Leaf { size: idx.len() };
    }
    let d = x[0].len();
    // Candidate features with spread at this node.
    let mut ranges: Vec<(usize, f64, f64)> = Vec::new();
    for f in 0..d {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &i in idx {
            lo = lo.min(x[i][f]);
            hi = hi.max(x[i][f]);
        }
        if hi > lo {
            ranges.push((f, lo, hi));
        }
    }
    if ranges.is_empty() {
        // All rows identical.
        return IsoNode::Leaf { size: idx.len() };
    }
    let (feature, lo, hi) = ranges[rng.below(ranges.len())];
    // Draw strictly inside the range so both children are non-empty.
    let mut threshold = rng.uniform_in(lo, hi);
    while threshold <= lo {
        threshold = rng.uniform_in(lo, hi);
    }
    let (mut left, mut right) = (Vec::new(), Vec::new());
    for &i in idx {
        if x[i][feature] < threshold {
            left.push(i);
        } else {
            right.push(i);
        }
    }
    IsoNode::Split {
        feature,
        threshold,
        left: Box::new(grow(x, &left, depth + 1, limit, rng)),
        right: Box::new(grow(x, &right, depth + 1, limit, rng)),
    }
}

/// Build the forest: each tree sees a random subsample of psi points (or all
/// points if fewer) and grows to the height limit ceil(log2 psi).
pub fn fit_iforest(x: &[Vec<f64>], params: &IForestParams) -> Result<IsolationForestModel, ModelError> {
    if x.len() < 2 {
        return Err(ModelError::DegenerateData("need at least 2 samples".into()));
    }
    if params.n_trees == 0 || params.psi < 2 {
        return Err(ModelError::InvalidConfig("need n_trees >= 1 and psi >= 2".into()));
    }
    let psi_used = params.psi.min(x.len());
    let limit = (psi_used as f64).log2().ceil() as usize;
    let trees: Vec<IsoNode> = (0..params.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = SplitMix64::derive(params.seed, t as u64);
            let sample = rng.sample_indices(x.len(), psi_used);
            grow(x, &sample, 0, limit, &mut rng)
        })
        .collect();
    Ok(IsolationForestModel { trees, psi_used })
}

impl IsolationForestModel {
    /// Path length of x in one tree: edges traversed plus the average-path
    /// correction at the reached leaf.
    fn path_length(node: &IsoNode, x: &[f64]) -> f64 {
        let mut depth = 0.0;
        let mut cur = node;
        loop {
            match cur {
                IsoNode::Leaf { size } => return depth + average_path_length(*size),
                IsoNode::Split { feature, threshold, left, right } => {
                    depth += 1.0;
                    cur = if x[*feature] < *threshold { left } else { right };
                }
            }
        }
    }

    /// Mean path length over trees.
    pub fn mean_path_length(&self, x: &[f64]) -> f64 {
        self.trees.iter().map(|t| Self::path_length(t, x)).sum::<f64>() / self.trees.len() as f64
    }

    /// Anomaly score 2^(-E[h(x)] / c(psi)) in (0, 1); higher = more anomalous.
    pub fn score(&self, x: &[f64]) -> f64 {
        let c = average_path_length(self.psi_used);
        2f64.powf(-self.mean_path_length(x) / c)
    }
}
