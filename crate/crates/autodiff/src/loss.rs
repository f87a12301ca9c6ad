//! Loss functions. Each returns the scalar loss and, where training needs
//! it, the gradient with respect to the first argument.

use crate::tensor::Tensor;

/// Numerically stable log(sum(exp(x))) via max-shift.
pub fn logsumexp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + xs.iter().map(|&x| (x - m).exp()).sum::<f64>().ln()
}

/// Stable log(1 + exp(x)).
pub fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// Mean cross-entropy of softmax(logits) against integer class targets.
/// Returns (loss, gradient w.r.t. logits).
pub fn softmax_cross_entropy(logits: &Tensor, targets: &[usize]) -> (f64, Tensor) {
    let (batch, k) = (logits.shape[0], logits.shape[1]);
    assert_eq!(batch, targets.len(), "target count mismatch");
    let mut grad = Tensor::zeros(logits.shape.clone());
    let mut loss = 0.0;
    for b in 0..batch {
        let row = &logits.data[b * k..][..k];
        let lse = logsumexp(row);
        loss += lse - row[targets[b]];
        for j in 0..k {
            let p = (row[j] - lse).exp();
            grad.data[b * k + j] = (p - if j == targets[b] { 1.0 } else { 0.0 }) / batch as f64;
        }
    }
    (loss / batch as f64, grad)
}

/// Mean binary cross-entropy computed from pre-sigmoid logits (fused form,
/// stable for any logit magnitude). Returns (loss, gradient w.r.t. logits).
pub fn sigmoid_bce_with_logits(logits: &Tensor, targets: &[f64]) -> (f64, Tensor) {
    let n = logits.numel();
    assert_eq!(n, targets.len(), "target count mismatch");
    let mut grad = Tensor::zeros(logits.shape.clone());
    let mut loss = 0.0;
    for (i, (&z, &t)) in logits.data.iter().zip(targets).enumerate() {
        loss += z.max(0.0) - z * t + (-z.abs()).exp().ln_1p();
        let p = 1.0 / (1.0 + (-z).exp());
        grad.data[i] = (p - t) / n as f64;
    }
    (loss / n as f64, grad)
}

/// Binary cross-entropy of a probability against a 0/1 target, with the
/// probability clamped away from the endpoints.
pub fn bce(prob: f64, target: f64) -> f64 {
    let p = prob.clamp(1e-12, 1.0 - 1e-12);
    -(target * p.ln() + (1.0 - target) * (1.0 - p).ln())
}

/// Mean squared error over all elements. Returns (loss, gradient w.r.t. `a`).
pub fn mse(a: &Tensor, b: &Tensor) -> (f64, Tensor) {
    assert_eq!(a.shape, b.shape, "mse shape mismatch");
    let n = a.numel() as f64;
    let mut grad = Tensor::zeros(a.shape.clone());
    let mut loss = 0.0;
    for (i, (&x, &y)) in a.data.iter().zip(&b.data).enumerate() {
        let d = x - y;
        loss += d * d;
        grad.data[i] = 2.0 * d / n;
    }
    (loss / n, grad)
}
