//! One-class SVM (nu formulation) trained by pairwise coordinate descent.
//!
//! Dual:  min 1/2 sum_ij a_i a_j K_ij
//!        s.t. 0 <= a_i <= 1/(nu*n),  sum(a) = 1.

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::svm::rbf_kernel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum OcGamma {
    /// 1 / (n_features * total variance of the training features).
    Scale,
    Value(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OcSvmParams {
    pub nu: f64,
    pub gamma: OcGamma,
    pub tol: f64,
}

impl Default for OcSvmParams {
    fn default() -> Self {
        OcSvmParams { nu: 0.1, gamma: OcGamma::Scale, tol: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OcSvmModel {
    pub support: Vec<Vec<f64>>,
    pub alpha: Vec<f64>,
    pub rho: f64,
    pub gamma: f64,
    pub nu: f64,
    pub dual_objective: f64,
}

const MAX_STEPS_PER_POINT: usize = 100_000;

fn resolve_gamma(x: &[Vec<f64>], gamma: OcGamma) -> f64 {
    match gamma {
        OcGamma::Value(g) => g,
        OcGamma::Scale => {
            let d = x[0].len();
            let n = x.len() as f64;
            let mut mean_var = 0.0;
            for f in 0..d {
                let mean: f64 = x.iter().map(|r| r[f]).sum::<f64>() / n;
                mean_var += x.iter().map(|r| (r[f] - mean) * (r[f] - mean)).sum::<f64>() / n;
            }
            mean_var /= d as f64;
            if mean_var > 1e-12 {
                1.0 / (d as f64 * mean_var)
            } else {
                1.0 / d as f64
            }
        }
    }
}

/// Fit the one-class SVM: greedy max-violating-pair coordinate descent on
/// the dual, then rho as the mean decision value over free support vectors.
pub fn fit_ocsvm(x: &[Vec<f64>], params: &OcSvmParams) -> Result<OcSvmModel, ModelError> {
    let n = x.len();
    if n < 2 {
        return Err(ModelError::DegenerateData("need at least 2 samples".into()));
    }
    if !(0.0 < params.nu && params.nu <= 1.0) {
        return Err(ModelError::InvalidConfig(format!("nu must be in (0, 1], got {}", params.nu)));
    }
    let gamma = resolve_gamma(x, params.gamma);
    let c = 1.0 / (params.nu * n as f64);

    let mut k = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = rbf_kernel(&x[i], &x[j], gamma);
            k[i * n + j] = v;
            k[j * n + i] = v;
        }
    }

    // Feasible start: fill bounds until the simplex constraint is met.
    let mut alpha = vec![0.0; n];
    let mut remaining = 1.0f64;
    for a in alpha.iter_mut() {
        let take = remaining.min(c);
        *a = take;
        remaining -= take;
        if remaining <= 0.0 {
            break;
        }
    }

    // Gradient G = K alpha.
    let mut grad = vec![0.0; n];
    for i in 0..n {
        grad[i] = (0..n).map(|j| k[i * n + j] * alpha[j]).sum();
    }

    let max_steps = MAX_STEPS_PER_POINT * n;
    let mut steps = 0usize;
    loop {
        // i: steepest ascent among decreasable (alpha > 0);
        // j: steepest descent among increasable (alpha < C).
        let mut i_best: Option<usize> = None;
        let mut j_best: Option<usize> = None;
        for t in 0..n {
            if alpha[t] > 0.0 && i_best.map(|i| grad[t] > grad[i]).unwrap_or(true) {
                i_best = Some(t);
            }
            if alpha[t] < c && j_best.map(|j| grad[t] < grad[j]).unwrap_or(true) {
                j_best = Some(t);
            }
        }
        let (i, j) = match (i_best, j_best) {
            (Some(i), Some(j)) => (i, j),
            _ => break,
        };
        if grad[i] - grad[j] < params.tol {
            break;
        }

        let eta = k[i * n + i] + k[j * n + j] - 2.0 * k[i * n + j];
        // Move mass from i to j; the unconstrained optimum of the pair
        // subproblem is (G_i - G_j) / eta.
        let mut delta = if eta > 1e-18 { (grad[i] - grad[j]) / eta } else { f64::INFINITY };
        delta = delta.min(alpha[i]).min(c - alpha[j]);
        if delta <= 0.0 {
            break;
        }
        alpha[i] -= delta;
        alpha[j] += delta;
        for t in 0..n {
            grad[t] += delta * (k[j * n + t] - k[i * n + t]);
        }

        steps += 1;
        if steps > max_steps {
            return Err(ModelError::NoConvergence { passes: steps });
        }
    }

    // rho: decision offset. At optimality G_i = sum_j a_j K_ij equals rho for
    // every margin (free) support vector; average for stability.
    let bound_eps = c * 1e-8;
    let free: Vec<usize> =
        (0..n).filter(|&i| alpha[i] > bound_eps && alpha[i] < c - bound_eps).collect();
    let rho = if free.is_empty() {
        // All alphas at bounds: take the midpoint of the active gradients.
        let upper = (0..n).filter(|&i| alpha[i] >= c - bound_eps).map(|i| grad[i]).fold(f64::NEG_INFINITY, f64::max);
        let lower = (0..n).filter(|&i| alpha[i] <= bound_eps).map(|i| grad[i]).fold(f64::INFINITY, f64::min);
        if lower.is_finite() {
            (upper + lower) / 2.0
        } else {
            upper
        }
    } else {
        free.iter().map(|&i| grad[i]).sum::<f64>() / free.len() as f64
    };

    let dual_objective: f64 = 0.5
        * (0..n)
            .map(|i| alpha[i] * grad[i])
            .sum::<f64>();

    let mut support = Vec::new();
    let mut sv_alpha = Vec::new();
    for i in 0..n {
        if alpha[i] > 1e-12 {
            support.push(x[i].clone());
            sv_alpha.push(alpha[i]);
        }
    }
    Ok(OcSvmModel { support, alpha: sv_alpha, rho, gamma, nu: params.nu, dual_objective })
}

impl OcSvmModel {
    /// Anomaly score: rho - sum(alpha_i k(x_i, x)). Positive means anomalous;
    /// magnitude grades the abnormality.
    pub fn score(&self, x: &[f64]) -> f64 {
        let k_sum: f64 = self
            .support
            .iter()
            .zip(&self.alpha)
            .map(|(sv, &a)| a * rbf_kernel(sv, x, self.gamma))
            .sum();
        self.rho - k_sum
    }

    /// sum(alpha); equals 1 at any feasible dual point.
    pub fn alpha_sum(&self) -> f64 {
        self.alpha.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cardioscope_rng::SplitMix64;

    fn blob(n: usize, d: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = SplitMix64::new(seed);
        (0..n).map(|_| (0..d).map(|_| rng.normal()).collect()).collect()
    }

    #[test]
    fn nu_one_forces_uniform_alphas() {
        let x = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let params = OcSvmParams { nu: 1.0, gamma: OcGamma::Value(0.5), tol: 1e-10 };
        let model = fit_ocsvm(&x, &params).unwrap();
        assert_eq!(model.alpha.len(), 3);
        for &a in &model.alpha {
            assert!((a - 1.0 / 3.0).abs() < 1e-12, "alpha {a}");
        }
        assert!((model.alpha_sum() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn margin_support_vectors_score_zero() {
        let x = blob(40, 3, 5);
        let params = OcSvmParams { nu: 0.3, gamma: OcGamma::Value(0.4), tol: 1e-10 };
        let model = fit_ocsvm(&x, &params).unwrap();
        let c = 1.0 / (0.3 * 40.0);
        let mut found_free = false;
        for (sv, &a) in model.support.iter().zip(&model.alpha) {
            if a > c * 1e-6 && a < c * (1.0 - 1e-6) {
                found_free = true;
                assert!(model.score(sv).abs() < 1e-6, "free SV score {}", model.score(sv));
            }
        }
        assert!(found_free, "no free support vector to check");
    }

    #[test]
    fn far_point_scores_near_rho_positive() {
        let x = blob(30, 2, 7);
        let params = OcSvmParams { nu: 0.2, gamma: OcGamma::Value(1.0), tol: 1e-10 };
        let model = fit_ocsvm(&x, &params).unwrap();
        let far = vec![100.0, -100.0];
        let score = model.score(&far);
        assert!(score > 0.0);
        assert!((score - model.rho).abs() < 1e-9, "kernel should vanish at distance");
    }

    #[test]
    fn planted_outlier_scores_above_inliers() {
        // gamma low enough that the kernel density level exceeds the box
        // bound 1/(nu n); the isolated point then saturates its alpha and
        // scores strictly outside the boundary.
        let mut x = blob(100, 4, 11);
        x.push(vec![8.0, 8.0, 8.0, 8.0]);
        let params = OcSvmParams { nu: 0.1, gamma: OcGamma::Value(0.1), tol: 1e-10 };
        let model = fit_ocsvm(&x, &params).unwrap();
        let outlier_score = model.score(&x[100]);
        let mut inlier_scores: Vec<f64> = (0..100).map(|i| model.score(&x[i])).collect();
        inlier_scores.sort_by(f64::total_cmp);
        let p95 = inlier_scores[94];
        assert!(outlier_score > p95, "outlier {outlier_score} <= p95 {p95}");
        assert!(outlier_score > 0.0, "outlier not flagged: {outlier_score}");
    }

    #[test]
    fn nu_property_over_20_seeds() {
        for seed in 0..20u64 {
            let x = blob(200, 3, 1000 + seed);
            let nu = 0.1;
            let params = OcSvmParams { nu, gamma: OcGamma::Value(0.5), tol: 1e-8 };
            let model = fit_ocsvm(&x, &params).unwrap();
            let outliers = x.iter().filter(|p| model.score(p) > 0.0).count() as f64 / 200.0;
            assert!(outliers <= nu + 0.05, "seed {seed}: outlier fraction {outliers}");
            let sv_fraction = model.alpha.len() as f64 / 200.0;
            assert!(sv_fraction >= nu - 0.05, "seed {seed}: SV fraction {sv_fraction}");
        }
    }
}
