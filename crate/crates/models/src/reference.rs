//! Independent reference solvers used by self-tests and the test suite.
//!
//! These deliberately share no code with the SMO solvers they check: both
//! duals are solved by projected gradient with exact projection onto the
//! feasible set (bisection on the equality multiplier).

use crate::svm::rbf_kernel;

/// Projection of v onto {0 <= a_i <= c_i, sum(a_i y_i) = 0}.
pub fn project_box_hyperplane(v: &[f64], y: &[f64], c: &[f64]) -> Vec<f64> {
    let residual = |lambda: f64| -> f64 {
        v.iter()
            .zip(y)
            .zip(c)
            .map(|((&vi, &yi), &ci)| yi * (vi - lambda * yi).clamp(0.0, ci))
            .sum()
    };
    let bound = v.iter().map(|x| x.abs()).fold(0.0f64, f64::max) + c.iter().cloned().fold(0.0, f64::max) + 1.0;
    let (mut lo, mut hi) = (-bound, bound);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if residual(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);
    v.iter().zip(y).zip(c).map(|((&vi, &yi), &ci)| (vi - lambda * yi).clamp(0.0, ci)).collect()
}

/// Projection of v onto {0 <= a_i <= c, sum(a) = 1}.
pub fn project_box_simplex(v: &[f64], c: f64) -> Vec<f64> {
    let residual = |lambda: f64| -> f64 {
        v.iter().map(|&vi| (vi - lambda).clamp(0.0, c)).sum::<f64>() - 1.0
    };
    let bound = v.iter().map(|x| x.abs()).fold(0.0f64, f64::max) + c + 1.0;
    let (mut lo, mut hi) = (-bound, bound);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if residual(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);
    v.iter().map(|&vi| (vi - lambda).clamp(0.0, c)).collect()
}

/// Maximize W(a) = sum(a) - 1/2 a' Q a over the binary-SVM feasible set by
/// projected gradient ascent; returns (alpha, objective).
pub fn svm_dual_reference(k: &[Vec<f64>], y: &[f64], c: &[f64], iters: usize) -> (Vec<f64>, f64) {
    let n = y.len();
    let q = |i: usize, j: usize| y[i] * y[j] * k[i][j];
    let mut alpha = vec![0.0; n];
    let step = 1.0 / n as f64;
    for _ in 0..iters {
        let grad: Vec<f64> = (0..n)
            .map(|i| 1.0 - (0..n).map(|j| q(i, j) * alpha[j]).sum::<f64>())
            .collect();
        let moved: Vec<f64> = alpha.iter().zip(&grad).map(|(&a, &g)| a + step * g).collect();
        alpha = project_box_hyperplane(&moved, y, c);
    }
    let mut obj: f64 = alpha.iter().sum();
    for i in 0..n {
        for j in 0..n {
            obj -= 0.5 * alpha[i] * alpha[j] * q(i, j);
        }
    }
    (alpha, obj)
}

/// Minimize 1/2 a' K a over the one-class feasible set by projected
/// gradient descent; returns (alpha, objective).
pub fn ocsvm_dual_reference(k: &[Vec<f64>], c: f64, iters: usize) -> (Vec<f64>, f64) {
    let n = k.len();
    let mut alpha = project_box_simplex(&vec![1.0 / n as f64; n], c);
    let step = 1.0 / n as f64;
    for _ in 0..iters {
        let grad: Vec<f64> = (0..n).map(|i| (0..n).map(|j| k[i][j] * alpha[j]).sum()).collect();
        let moved: Vec<f64> = alpha.iter().zip(&grad).map(|(&a, &g)| a - step * g).collect();
        alpha = project_box_simplex(&moved, c);
    }
    let mut obj = 0.0;
    for i in 0..n {
        for j in 0..n {
            obj += 0.5 * alpha[i] * alpha[j] * k[i][j];
        }
    }
    (alpha, obj)
}

/// Kernel matrix helper for reference computations.
pub fn kernel_matrix(x: &[Vec<f64>], gamma: f64) -> Vec<Vec<f64>> {
    (0..x.len())
        .map(|i| (0..x.len()).map(|j| rbf_kernel(&x[i], &x[j], gamma)).collect())
        .collect()
}
