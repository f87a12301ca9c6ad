//! Soft-margin binary SVM trained by sequential minimal optimization.
//!
//! Solves the dual
//!   max  sum(a) - 1/2 sum_ij a_i a_j y_i y_j K_ij
//!   s.t. 0 <= a_i <= C_i,  sum(a_i y_i) = 0
//! with per-class box bounds C_i = C * w(y_i) and an RBF kernel.

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::tree::ClassWeights;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gamma {
    /// 1 / n_features.
    Auto,
    Value(f64),
}

impl Gamma {
    pub fn resolve(&self, n_features: usize) -> f64 {
        match self {
            Gamma::Auto => 1.0 / n_features as f64,
            Gamma::Value(g) => *g,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    pub c: f64,
    pub gamma: Gamma,
    pub class_weights: ClassWeights,
    /// KKT violation tolerance for the stopping test.
    pub tol: f64,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams { c: 1.0, gamma: Gamma::Auto, class_weights: ClassWeights::default(), tol: 1e-3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub support: Vec<Vec<f64>>,
    /// alpha_i * y_i per support vector.
    pub alpha_y: Vec<f64>,
    pub bias: f64,
    pub gamma: f64,
    /// Dual objective at the solution, for diagnostics and oracle checks.
    pub dual_objective: f64,
}

pub fn rbf_kernel(a: &[f64], b: &[f64], gamma: f64) -> f64 {
    let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (-gamma * d2).exp()
}

const STEP_EPS: f64 = 1e-12;
const MAX_PASSES: usize = 100_000;

struct Smo<'a> {
    k: Vec<f64>, // n x n kernel matrix
    y: Vec<f64>,
    c: Vec<f64>,
    alpha: Vec<f64>,
    err: Vec<f64>, // E_i = f(x_i) - y_i
    b: f64,
    n: usize,
    tol: f64,
    x: &'a [Vec<f64>],
}

impl<'a> Smo<'a> {
    fn kij(&self, i: usize, j: usize) -> f64 {
        self.k[i * self.n + j]
    }

    fn non_bound(&self, i: usize) -> bool {
        self.alpha[i] > 0.0 && self.alpha[i] < self.c[i]
    }

    fn take_step(&mut self, i1: usize, i2: usize) -> bool {
        if i1 == i2 {
            return false;
        }
        let (a1_old, a2_old) = (self.alpha[i1], self.alpha[i2]);
        let (y1, y2) = (self.y[i1], self.y[i2]);
        let (e1, e2) = (self.err[i1], self.err[i2]);
        let s = y1 * y2;
        let (c1, c2) = (self.c[i1], self.c[i2]);

        let (lo, hi) = if (y1 - y2).abs() > 0.5 {
            ((a2_old - a1_old).max(0.0), (c1 + a2_old - a1_old).min(c2))
        } else {
            ((a1_old + a2_old - c1).max(0.0), (a1_old + a2_old).min(c2))
        };
        if hi - lo < STEP_EPS {
            return false;
        }

        let (k11, k12, k22) = (self.kij(i1, i1), self.kij(i1, i2), self.kij(i2, i2));
        let eta = k11 + k22 - 2.0 * k12;
        let mut a2 = if eta > 0.0 {
            (a2_old + y2 * (e1 - e2) / eta).clamp(lo, hi)
        } else {
            // Flat or concave direction: the optimum sits at an endpoint.
            // Evaluate the dual restricted to the constraint segment, with
            // v_i = sum over the other points of alpha_j y_j K_ij.
            let v1 = e1 + y1 - self.b - y1 * a1_old * k11 - y2 * a2_old * k12;
            let v2 = e2 + y2 - self.b - y1 * a1_old * k12 - y2 * a2_old * k22;
            let w_at = |a2c: f64| {
                let a1c = a1_old + s * (a2_old - a2c);
                a1c + a2c
                    - 0.5 * k11 * a1c * a1c
                    - 0.5 * k22 * a2c * a2c
                    - s * k12 * a1c * a2c
                    - y1 * a1c * v1
                    - y2 * a2c * v2
            };
            let (lo_val, hi_val) = (w_at(lo), w_at(hi));
            if lo_val > hi_val + STEP_EPS {
                lo
            } else if hi_val > lo_val + STEP_EPS {
                hi
            } else {
                a2_old
            }
        };
        // Snap to the box to avoid lingering 1e-15 dust.
        if a2 < STEP_EPS {
            a2 = 0.0;
        } else if a2 > c2 - STEP_EPS {
            a2 = c2;
        }
        if (a2 - a2_old).abs() < STEP_EPS * (a2 + a2_old + STEP_EPS) {
            return false;
        }
        let mut a1 = a1_old + s * (a2_old - a2);
        if a1 < STEP_EPS {
            a1 = 0.0;
        } else if a1 > c1 - STEP_EPS {
            a1 = c1;
        }

        let (d1, d2) = (y1 * (a1 - a1_old), y2 * (a2 - a2_old));
        let b1 = self.b - e1 - d1 * k11 - d2 * k12;
        let b2 = self.b - e2 - d1 * k12 - d2 * k22;
        let b_new = if a1 > 0.0 && a1 < c1 {
            b1
        } else if a2 > 0.0 && a2 < c2 {
            b2
        } else {
            (b1 + b2) / 2.0
        };
        let db = b_new - self.b;

        for j in 0..self.n {
            self.err[j] += d1 * self.kij(i1, j) + d2 * self.kij(i2, j) + db;
        }
        self.alpha[i1] = a1;
        self.alpha[i2] = a2;
        self.b = b_new;
        true
    }

    fn examine(&mut self, i2: usize) -> bool {
        let e2 = self.err[i2];
        let r2 = e2 * self.y[i2];
        let violated = (r2 < -self.tol && self.alpha[i2] < self.c[i2]) || (r2 > self.tol && self.alpha[i2] > 0.0);
        if !violated {
            return false;
        }
        // Second choice: largest |E1 - E2| among non-bound points.
        let mut best: Option<(f64, usize)> = None;
        for i1 in 0..self.n {
            if self.non_bound(i1) {
                let gap = (self.err[i1] - e2).abs();
                if best.map(|(g, _)| gap > g).unwrap_or(true) {
                    best = Some((gap, i1));
                }
            }
        }
        if let Some((_, i1)) = best {
            if self.take_step(i1, i2) {
                return true;
            }
        }
        for i1 in 0..self.n {
            if self.non_bound(i1) && self.take_step(i1, i2) {
                return true;
            }
        }
        for i1 in 0..self.n {
            if self.take_step(i1, i2) {
                return true;
            }
        }
        false
    }

    fn dual_objective(&self) -> f64 {
        let mut obj: f64 = self.alpha.iter().sum();
        for i in 0..self.n {
            if self.alpha[i] == 0.0 {
                continue;
            }
            for j in 0..self.n {
                if self.alpha[j] != 0.0 {
                    obj -= 0.5 * self.alpha[i] * self.alpha[j] * self.y[i] * self.y[j] * self.kij(i, j);
                }
            }
        }
        obj
    }
}

/// Train with SMO. Labels: true = Abnormal = +1.
pub fn smo_fit_svm(x: &[Vec<f64>], y: &[bool], params: &SvmParams) -> Result<SvmModel, ModelError> {
    if x.len() != y.len() || x.is_empty() {
        return Err(ModelError::DegenerateData("empty training set or length mismatch".into()));
    }
    if !y.iter().any(|&v| v) || !y.iter().any(|&v| !v) {
        return Err(ModelError::DegenerateData("both classes required".into()));
    }
    let n = x.len();
    let gamma = params.gamma.resolve(x[0].len());
    let mut k = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = rbf_kernel(&x[i], &x[j], gamma);
            k[i * n + j] = v;
            k[j * n + i] = v;
        }
    }
    let yv: Vec<f64> = y.iter().map(|&v| if v { 1.0 } else { -1.0 }).collect();
    let c: Vec<f64> = y.iter().map(|&v| params.c * params.class_weights.of(v)).collect();
    let err: Vec<f64> = yv.iter().map(|&yi| -yi).collect(); // f == 0 initially

    let mut solver = Smo { k, y: yv, c, alpha: vec![0.0; n], err, b: 0.0, n, tol: params.tol, x };

    let mut examine_all = true;
    let mut passes = 0usize;
    loop {
        let mut changed = 0usize;
        if examine_all {
            for i in 0..n {
                changed += usize::from(solver.examine(i));
            }
        } else {
            for i in 0..n {
                if solver.non_bound(i) {
                    changed += usize::from(solver.examine(i));
                }
            }
        }
        passes += 1;
        if passes > MAX_PASSES {
            return Err(ModelError::NoConvergence { passes });
        }
        if examine_all {
            if changed == 0 {
                break;
            }
            examine_all = false;
        } else if changed == 0 {
            examine_all = true;
        }
    }

    let dual_objective = solver.dual_objective();
    let mut support = Vec::new();
    let mut alpha_y = Vec::new();
    for i in 0..n {
        if solver.alpha[i] > 1e-12 {
            support.push(solver.x[i].clone());
            alpha_y.push(solver.alpha[i] * solver.y[i]);
        }
    }
    Ok(SvmModel { support, alpha_y, bias: solver.b, gamma, dual_objective })
}

impl SvmModel {
    /// Signed decision value: positive predicts Abnormal.
    pub fn decision_function(&self, x: &[f64]) -> f64 {
        self.support
            .iter()
            .zip(&self.alpha_y)
            .map(|(sv, &ay)| ay * rbf_kernel(sv, x, self.gamma))
            .sum::<f64>()
            + self.bias
    }

    pub fn predict(&self, x: &[f64]) -> bool {
        self.decision_function(x) >= 0.0
    }

    /// sum(alpha_i y_i); zero at a feasible dual point.
    pub fn equality_residual(&self) -> f64 {
        self.alpha_y.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cardioscope_rng::SplitMix64;

    fn tight() -> SvmParams {
        SvmParams { tol: 1e-8, ..Default::default() }
    }

    #[test]
    fn separable_points_classified_with_margin() {
        let x = vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![4.0, 4.0], vec![4.0, 5.0]];
        let y = vec![false, false, true, true];
        let params = SvmParams { c: 10.0, gamma: Gamma::Value(0.5), ..tight() };
        let model = smo_fit_svm(&x, &y, &params).unwrap();
        for (xi, &yi) in x.iter().zip(&y) {
            assert_eq!(model.predict(xi), yi);
            // Margin support vectors sit at |f| = 1 within tolerance.
            let f = model.decision_function(xi);
            assert!(f.abs() >= 1.0 - 1e-6, "f = {f}");
        }
        assert!(model.equality_residual().abs() < 1e-6);
    }

    #[test]
    fn contradictory_duplicate_points_saturate_at_bound() {
        // Identical point with opposite labels and a huge C: no separator
        // exists; both multipliers hit the shared bound.
        let x = vec![vec![1.0, 1.0], vec![1.0, 1.0], vec![0.0, 0.0], vec![2.0, 2.0]];
        let y = vec![true, false, false, true];
        let params = SvmParams { c: 1e6, gamma: Gamma::Value(1.0), ..tight() };
        let model = smo_fit_svm(&x, &y, &params).unwrap();
        // The duplicated pair contributes opposite-signed alphas of equal
        // magnitude; the dual stays feasible.
        assert!(model.equality_residual().abs() < 1e-5);
    }

    #[test]
    fn table_config_parses_and_trains() {
        // Published preset: C = 0.07, rbf, gamma auto, weights 19:3.
        let mut rng = SplitMix64::new(2);
        let x: Vec<Vec<f64>> = (0..30)
            .map(|i| {
                let c = i % 2 == 0;
                let base = if c { 1.5 } else { -1.5 };
                (0..5).map(|_| base + rng.normal()).collect()
            })
            .collect();
        let y: Vec<bool> = (0..30).map(|i| i % 2 == 0).collect();
        let params = SvmParams {
            c: 0.07,
            gamma: Gamma::Auto,
            class_weights: ClassWeights::new(19.0, 3.0),
            tol: 1e-3,
        };
        let model = smo_fit_svm(&x, &y, &params).unwrap();
        assert!(model.equality_residual().abs() < 1e-6);
        assert!((model.gamma - 0.2).abs() < 1e-12, "gamma auto = 1/5");
    }

    #[test]
    fn alphas_respect_class_weighted_box() {
        let mut rng = SplitMix64::new(9);
        let x: Vec<Vec<f64>> = (0..16).map(|_| (0..3).map(|_| rng.normal()).collect()).collect();
        let y: Vec<bool> = (0..16).map(|i| i % 2 == 0).collect();
        let params = SvmParams {
            c: 0.5,
            gamma: Gamma::Value(0.8),
            class_weights: ClassWeights::new(2.0, 1.0),
            tol: 1e-8,
        };
        let model = smo_fit_svm(&x, &y, &params).unwrap();
        for (sv, &ay) in model.support.iter().zip(&model.alpha_y) {
            let abnormal = ay > 0.0;
            let bound = 0.5 * if abnormal { 2.0 } else { 1.0 };
            assert!(ay.abs() <= bound + 1e-9, "alpha {} exceeds bound {bound}", ay.abs());
            let _ = sv;
        }
    }
}
