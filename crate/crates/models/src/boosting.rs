//! Gradient boosting with logistic loss and Newton leaf values.

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoostingParams {
    pub n_estimators: usize,
    pub max_depth: usize,
    pub learning_rate: f64,
}

/// Regression tree fitted to residuals: squared-error splits, depth-limited,
/// no leaf budget, leaves carry the Newton value sum(r) / sum(p(1-p)).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RegNode {
    Leaf { value: f64 },
    Split { feature: usize, threshold: f64, left: Box<RegNode>, right: Box<RegNode> },
}

impl RegNode {
    fn predict(&self, x: &[f64]) -> f64 {
        match self {
            RegNode::Leaf { value } => *value,
            RegNode::Split { feature, threshold, left, right } => {
                if x[*feature] <= *threshold {
                    left.predict(x)
                } else {
                    right.predict(x)
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoostedModel {
    /// Initial log-odds of the base rate.
    pub f0: f64,
    pub trees: Vec<RegNode>,
    pub learning_rate: f64,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

const HESSIAN_FLOOR: f64 = 1e-16;

/// Best squared-error split of the index set, ties toward lower feature
/// index then lower threshold (first strict improvement wins in scan order).
fn best_sse_split(x: &[Vec<f64>], residuals: &[f64], idx: &[usize]) -> Option<(usize, f64, f64)> {
    let total_sum: f64 = idx.iter().map(|&i| residuals[i]).sum();
    let n = idx.len() as f64;
    let parent_score = total_sum * total_sum / n;

    let mut best: Option<(usize, f64, f64)> = None;
    let mut order: Vec<usize> = idx.to_vec();
    for f in 0..x[0].len() {
        order.sort_by(|&a, &b| x[a][f].total_cmp(&x[b][f]).then(a.cmp(&b)));
        let mut left_sum = 0.0;
        for w in 0..order.len() - 1 {
            let i = order[w];
            left_sum += residuals[i];
            let v = x[i][f];
            let v_next = x[order[w + 1]][f];
            if v == v_next {
                continue;
            }
            let threshold = v + (v_next - v) / 2.0;
            let nl = (w + 1) as f64;
            let nr = n - nl;
            let right_sum = total_sum - left_sum;
            // SSE reduction equals the gain of the score sum(r)^2 / n.
            let gain = left_sum * left_sum / nl + right_sum * right_sum / nr - parent_score;
            if gain > best.map(|b| b.2).unwrap_or(1e-12) {
                best = Some((f, threshold, gain));
            }
        }
    }
    best
}

fn grow_regression(
    x: &[Vec<f64>],
    residuals: &[f64],
    hessians: &[f64],
    idx: &[usize],
    depth: usize,
    max_depth: usize,
) -> RegNode {
    let newton_leaf = |idx: &[usize]| {
        let num: f64 = idx.iter().map(|&i| residuals[i]).sum();
        let den: f64 = idx.iter().map(|&i| hessians[i]).sum();
        RegNode::Leaf { value: num / den.max(HESSIAN_FLOOR) }
    };
    if depth >= max_depth || idx.len() < 2 {
        return newton_leaf(idx);
    }
    match best_sse_split(x, residuals, idx) {
        None => newton_leaf(idx),
        Some((feature, threshold, _)) => {
            let (mut left, mut right) = (Vec::new(), Vec::new());
            for &i in idx {
                if x[i][feature] <= threshold {
                    left.push(i);
                } else {
                    right.push(i);
                }
            }
            RegNode::Split {
                feature,
                threshold,
                left: Box::new(grow_regression(x, residuals, hessians, &left, depth + 1, max_depth)),
                right: Box::new(grow_regression(x, residuals, hessians, &right, depth + 1, max_depth)),
            }
        }
    }
}

/// Fit a boosted classifier: F0 = base-rate log-odds, then each stage fits a
/// squared-error tree to residuals y - sigmoid(F) and applies Newton leaf
/// values, with F updated by learning_rate times the tree output.
pub fn fit_gradient_boosting(x: &[Vec<f64>], y: &[bool], params: &BoostingParams) -> Result<BoostedModel, ModelError> {
    if x.is_empty() || x.len() != y.len() {
        return Err(ModelError::DegenerateData("empty training set or length mismatch".into()));
    }
    let n = x.len();
    let base_rate = (y.iter().filter(|&&v| v).count() as f64 / n as f64).clamp(1e-12, 1.0 - 1e-12);
    let f0 = (base_rate / (1.0 - base_rate)).ln();

    let mut f: Vec<f64> = vec![f0; n];
    let mut trees = Vec::with_capacity(params.n_estimators);
    let idx: Vec<usize> = (0..n).collect();
    for _ in 0..params.n_estimators {
        let probs: Vec<f64> = f.iter().map(|&z| sigmoid(z)).collect();
        let residuals: Vec<f64> = y.iter().zip(&probs).map(|(&yi, &p)| f64::from(yi) - p).collect();
        let hessians: Vec<f64> = probs.iter().map(|&p| p * (1.0 - p)).collect();
        let tree = grow_regression(x, &residuals, &hessians, &idx, 0, params.max_depth);
        for (fi, xi) in f.iter_mut().zip(x) {
            *fi += params.learning_rate * tree.predict(xi);
        }
        trees.push(tree);
    }
    Ok(BoostedModel { f0, trees, learning_rate: params.learning_rate })
}

impl BoostedModel {
    pub fn decision_function(&self, x: &[f64]) -> f64 {
        self.f0 + self.learning_rate * self.trees.iter().map(|t| t.predict(x)).sum::<f64>()
    }

    /// Probability of the Abnormal class.
    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        sigmoid(self.decision_function(x))
    }

    pub fn predict(&self, x: &[f64]) -> bool {
        self.predict_proba(x) >= 0.5
    }
}

/// Mean logistic loss of predictions against binary labels.
pub fn log_loss(probs: &[f64], y: &[bool]) -> f64 {
    probs
        .iter()
        .zip(y)
        .map(|(&p, &yi)| {
            let p = p.clamp(1e-12, 1.0 - 1e-12);
            if yi {
                -p.ln()
            } else {
                -(1.0 - p).ln()
            }
        })
        .sum::<f64>()
        / y.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use cardioscope_rng::SplitMix64;

    #[test]
    fn zero_learning_rate_predicts_base_rate() {
        let x: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        let y: Vec<bool> = (0..10).map(|i| i < 3).collect();
        let params = BoostingParams { n_estimators: 5, max_depth: 3, learning_rate: 0.0 };
        let model = fit_gradient_boosting(&x, &y, &params).unwrap();
        for xi in &x {
            assert!((model.predict_proba(xi) - 0.3).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_trees_predict_base_rate() {
        let x = vec![vec![0.0], vec![1.0]];
        let y = vec![true, false];
        let params = BoostingParams { n_estimators: 0, max_depth: 3, learning_rate: 0.1 };
        let model = fit_gradient_boosting(&x, &y, &params).unwrap();
        assert!((model.predict_proba(&[0.5]) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn single_stump_separates_stump_separable_data() {
        let x: Vec<Vec<f64>> = (0..8).map(|i| vec![i as f64]).collect();
        let y: Vec<bool> = (0..8).map(|i| i >= 4).collect();
        let params = BoostingParams { n_estimators: 1, max_depth: 1, learning_rate: 1.0 };
        let model = fit_gradient_boosting(&x, &y, &params).unwrap();
        let correct = x.iter().zip(&y).filter(|(xi, &yi)| model.predict(xi) == yi).count();
        assert_eq!(correct, 8);
    }

    #[test]
    fn training_log_loss_non_increasing_over_50_stages() {
        let mut rng = SplitMix64::new(44);
        let x: Vec<Vec<f64>> = (0..120).map(|_| (0..5).map(|_| rng.normal()).collect()).collect();
        let y: Vec<bool> = x.iter().map(|r| r[0] + 0.5 * r[1] + 0.3 * rng.normal() > 0.0).collect();
        let mut losses = Vec::new();
        for stages in 0..=50 {
            let params = BoostingParams { n_estimators: stages, max_depth: 2, learning_rate: 0.1 };
            let model = fit_gradient_boosting(&x, &y, &params).unwrap();
            let probs: Vec<f64> = x.iter().map(|xi| model.predict_proba(xi)).collect();
            losses.push(log_loss(&probs, &y));
        }
        for w in losses.windows(2) {
            assert!(w[1] <= w[0] + 1e-10, "log-loss rose: {} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn json_roundtrip() {
        let x = vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]];
        let y = vec![false, false, true, true];
        let params = BoostingParams { n_estimators: 3, max_depth: 2, learning_rate: 0.5 };
        let model = fit_gradient_boosting(&x, &y, &params).unwrap();
        let back: BoostedModel = serde_json::from_str(&serde_json::to_string(&model).unwrap()).unwrap();
        assert_eq!(back, model);
    }
}
