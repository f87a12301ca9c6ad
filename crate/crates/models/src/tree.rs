//! Class-weighted decision tree with entropy criterion and best-first
//! growth, so a leaf budget is honored exactly.

use cardioscope_rng::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Per-class sample weights (abnormal : normal).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassWeights {
    pub abnormal: f64,
    pub normal: f64,
}

impl Default for ClassWeights {
    fn default() -> Self {
        ClassWeights { abnormal: 1.0, normal: 1.0 }
    }
}

impl ClassWeights {
    pub fn new(abnormal: f64, normal: f64) -> Self {
        assert!(abnormal > 0.0 && normal > 0.0, "class weights must be positive");
        ClassWeights { abnormal, normal }
    }

    #[inline]
    pub fn of(&self, abnormal: bool) -> f64 {
        if abnormal {
            self.abnormal
        } else {
            self.normal
        }
    }
}

/// Weighted entropy in bits: -sum p log2 p over class proportions.
pub fn entropy(weighted_counts: [f64; 2]) -> Result<f64, ModelError> {
    let total = weighted_counts[0] + weighted_counts[1];
    if total <= 0.0 {
        return Err(ModelError::DegenerateData("entropy of an empty node".into()));
    }
    let mut h = 0.0;
    for w in weighted_counts {
        if w > 0.0 {
            let p = w / total;
            h -= p * p.log2();
        }
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Leaf {
        /// Weighted probability of the Abnormal class.
        prob_abnormal: f64,
        /// Weighted class mass (normal, abnormal) that reached this leaf.
        weighted: [f64; 2],
    },
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub root: TreeNode,
    pub params: TreeParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: usize,
    pub max_leaf_nodes: usize,
    pub class_weights: ClassWeights,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams { max_depth: usize::MAX, max_leaf_nodes: usize::MAX, class_weights: ClassWeights::default() }
    }
}

/// The best (feature, threshold) candidate for one frontier leaf.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SplitChoice {
    pub feature: usize,
    pub threshold: f64,
    pub gain: f64,
}

/// Weighted class mass of an index set.
fn class_mass(y: &[bool], idx: &[usize], w: &ClassWeights) -> [f64; 2] {
    let mut mass = [0.0; 2];
    for &i in idx {
        mass[usize::from(y[i])] += w.of(y[i]);
    }
    mass
}

/// Scan all candidate thresholds (midpoints of consecutive distinct sorted
/// values) of the given features and return the gain-maximizing split.
/// Ties break toward the lower feature index, then the lower threshold,
/// because candidates are visited in that order and only strict improvement
/// replaces the incumbent.
pub(crate) fn best_split(
    x: &[Vec<f64>],
    y: &[bool],
    idx: &[usize],
    features: &[usize],
    weights: &ClassWeights,
) -> Option<SplitChoice> {
    let parent_mass = class_mass(y, idx, weights);
    let parent_total = parent_mass[0] + parent_mass[1];
    let parent_cost = entropy(parent_mass).ok()? * parent_total;

    let mut best: Option<SplitChoice> = None;
    let mut order: Vec<usize> = idx.to_vec();
    for &f in features {
        order.sort_by(|&a, &b| x[a][f].total_cmp(&x[b][f]).then(a.cmp(&b)));
        let mut left = [0.0f64; 2];
        for w in 0..order.len() - 1 {
            let i = order[w];
            left[usize::from(y[i])] += weights.of(y[i]);
            let v = x[i][f];
            let v_next = x[order[w + 1]][f];
            if v == v_next {
                continue;
            }
            let threshold = v + (v_next - v) / 2.0;
            let right = [parent_mass[0] - left[0], parent_mass[1] - left[1]];
            let (lt, rt) = (left[0] + left[1], right[0] + right[1]);
            let cost = entropy(left).map(|h| h * lt).unwrap_or(0.0)
                + entropy(right).map(|h| h * rt).unwrap_or(0.0);
            let gain = parent_cost - cost;
            if gain > best.map(|b| b.gain).unwrap_or(0.0) {
                best = Some(SplitChoice { feature: f, threshold, gain });
            }
        }
    }
    best
}

fn leaf_from(y: &[bool], idx: &[usize], w: &ClassWeights) -> TreeNode {
    let mass = class_mass(y, idx, w);
    let total = mass[0] + mass[1];
    TreeNode::Leaf { prob_abnormal: if total > 0.0 { mass[1] / total } else { 0.5 }, weighted: mass }
}

/// Arena node used during best-first growth.
enum Grow {
    Pending { idx: Vec<usize>, depth: usize },
    Done(TreeNode),
    Internal { feature: usize, threshold: f64, left: usize, right: usize },
}

/// Best-first construction: repeatedly split the frontier leaf with the
/// largest weighted impurity decrease until the leaf budget is exhausted or
/// no positive-gain split remains.
///
/// `feature_sampler`, when set, draws the candidate feature subset per split
/// (used by random forests); otherwise all features are candidates.
pub(crate) fn grow_tree(
    x: &[Vec<f64>],
    y: &[bool],
    idx: Vec<usize>,
    params: &TreeParams,
    mut feature_sampler: Option<(usize, &mut SplitMix64)>,
) -> TreeNode {
    let n_features = x[0].len();
    let all_features: Vec<usize> = (0..n_features).collect();

    let mut arena: Vec<Grow> = vec![Grow::Pending { idx, depth: 0 }];
    // Candidate heap ordered by (gain, insertion order); Vec-based max scan
    // keeps the tie-break explicit and the code simple at desk scale.
    struct Candidate {
        node: usize,
        choice: SplitChoice,
        order: usize,
    }
    let mut candidates: Vec<Candidate> = Vec::new();
    let mut counter = 0usize;
    let mut n_leaves = 1usize;

    let propose = |arena: &mut Vec<Grow>,
                       candidates: &mut Vec<Candidate>,
                       counter: &mut usize,
                       sampler: &mut Option<(usize, &mut SplitMix64)>,
                       node: usize| {
        let (idx, depth) = match &arena[node] {
            Grow::Pending { idx, depth } => (idx.clone(), *depth),
            _ => return,
        };
        if depth >= params.max_depth || idx.len() < 2 {
            return;
        }
        let features: Vec<usize> = match sampler {
            Some((k, rng)) => {
                let mut sampled = rng.sample_indices(n_features, (*k).min(n_features));
                sampled.sort_unstable();
                sampled
            }
            None => all_features.clone(),
        };
        if let Some(choice) = best_split(x, y, &idx, &features, &params.class_weights) {
            if choice.gain > 0.0 {
                candidates.push(Candidate { node, choice, order: *counter });
                *counter += 1;
            }
        }
    };

    propose(&mut arena, &mut candidates, &mut counter, &mut feature_sampler, 0);

    while n_leaves < params.max_leaf_nodes && !candidates.is_empty() {
        // Largest gain wins; earlier insertion wins ties.
        let mut pick = 0;
        for (i, c) in candidates.iter().enumerate().skip(1) {
            let best = &candidates[pick];
            if c.choice.gain > best.choice.gain
                || (c.choice.gain == best.choice.gain && c.order < best.order)
            {
                pick = i;
            }
        }
        let Candidate { node, choice, .. } = candidates.swap_remove(pick);

        let (idx, depth) = match &arena[node] {
            Grow::Pending { idx, depth } => (idx.clone(), *depth),
            _ => unreachable!("candidate points at a split node"),
        };
        let (mut left_idx, mut right_idx) = (Vec::new(), Vec::new());
        for &i in &idx {
            if x[i][choice.feature] <= choice.threshold {
                left_idx.push(i);
            } else {
                right_idx.push(i);
            }
        }
        let left = arena.len();
        arena.push(Grow::Pending { idx: left_idx, depth: depth + 1 });
        let right = arena.len();
        arena.push(Grow::Pending { idx: right_idx, depth: depth + 1 });
        arena[node] = Grow::Internal { feature: choice.feature, threshold: choice.threshold, left, right };
        n_leaves += 1;

        propose(&mut arena, &mut candidates, &mut counter, &mut feature_sampler, left);
        propose(&mut arena, &mut candidates, &mut counter, &mut feature_sampler, right);
    }

    // Materialize remaining pending nodes as leaves, then fold the arena.
    for node in arena.iter_mut() {
        if let Grow::Pending { idx, .. } = node {
            *node = Grow::Done(leaf_from(y, idx, &params.class_weights));
        }
    }
    fn fold(arena: &mut [Grow], at: usize) -> TreeNode {
        match std::mem::replace(&mut arena[at], Grow::Done(TreeNode::Leaf { prob_abnormal: 0.0, weighted: [0.0; 2] })) {
            Grow::Done(node) => node,
            Grow::Internal { feature, threshold, left, right } => TreeNode::Split {
                feature,
                threshold,
                left: Box::new(fold(arena, left)),
                right: Box::new(fold(arena, right)),
            },
            Grow::Pending { .. } => unreachable!("pending node survived materialization"),
        }
    }
    fold(&mut arena, 0)
}

/// Fit a classification tree. Labels: true = Abnormal.
pub fn fit_decision_tree(x: &[Vec<f64>], y: &[bool], params: &TreeParams) -> Result<DecisionTree, ModelError> {
    if x.is_empty() || x.len() != y.len() {
        return Err(ModelError::DegenerateData("empty training set or length mismatch".into()));
    }
    if params.max_leaf_nodes < 1 {
        return Err(ModelError::InvalidConfig("max_leaf_nodes must be at least 1".into()));
    }
    let idx: Vec<usize> = (0..x.len()).collect();
    let root = grow_tree(x, y, idx, params, None);
    Ok(DecisionTree { root, params: params.clone() })
}

impl DecisionTree {
    /// Probability of the Abnormal class.
    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf { prob_abnormal, .. } => return *prob_abnormal,
                TreeNode::Split { feature, threshold, left, right } => {
                    node = if x[*feature] <= *threshold { left } else { right };
                }
            }
        }
    }

    pub fn predict(&self, x: &[f64]) -> bool {
        self.predict_proba(x) >= 0.5
    }

    pub fn n_leaves(&self) -> usize {
        fn count(node: &TreeNode) -> usize {
            match node {
                TreeNode::Leaf { .. } => 1,
                TreeNode::Split { left, right, .. } => count(left) + count(right),
            }
        }
        count(&self.root)
    }

    pub fn depth(&self) -> usize {
        fn depth(node: &TreeNode) -> usize {
            match node {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + depth(left).max(depth(right)),
            }
        }
        depth(&self.root)
    }
}
