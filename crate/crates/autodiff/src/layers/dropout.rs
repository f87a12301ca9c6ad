//! Inverted dropout.

use crate::layer::{Layer, LayerSpec, Mode, Pass};
use crate::tensor::Tensor;

/// Dropout with inverted scaling: surviving activations are divided by the
/// keep probability at train time so the expected output equals the input.
/// Eval mode is the identity.
pub struct Dropout {
    rate: f64,
    cached_mask: Option<Vec<f64>>,
}

impl Dropout {
    pub fn new(rate: f64) -> Self {
        assert!((0.0..1.0).contains(&rate), "dropout rate must be in [0, 1)");
        Dropout { rate, cached_mask: None }
    }
}

impl Layer for Dropout {
    fn forward(&mut self, input: &Tensor, pass: &mut Pass) -> Tensor {
        if pass.mode == Mode::Eval || self.rate == 0.0 {
            self.cached_mask = None;
            return input.clone();
        }
        let keep = 1.0 - self.rate;
        let mask: Vec<f64> = (0..input.numel())
            .map(|_| if pass.rng.uniform() < keep { 1.0 / keep } else { 0.0 })
            .collect();
        let mut out = input.clone();
        for (v, m) in out.data.iter_mut().zip(&mask) {
            *v *= m;
        }
        self.cached_mask = Some(mask);
        out
    }

    fn backward(&mut self, grad_out: &Tensor) -> Tensor {
        match &self.cached_mask {
            None => grad_out.clone(),
            Some(mask) => {
                let mut grad_in = grad_out.clone();
                for (g, m) in grad_in.data.iter_mut().zip(mask) {
                    *g *= m;
                }
                grad_in
            }
        }
    }

    fn spec(&self) -> LayerSpec {
        LayerSpec::Dropout { rate: self.rate }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cardioscope_rng::SplitMix64;

    #[test]
    fn eval_mode_is_identity() {
        let mut rng = SplitMix64::new(0);
        let mut drop = Dropout::new(0.5);
        let x = Tensor::new(vec![1, 5], vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        let y = drop.forward(&x, &mut Pass { mode: Mode::Eval, rng: &mut rng });
        assert_eq!(y.data, x.data);
    }

    #[test]
    fn train_mode_preserves_expectation() {
        let mut rng = SplitMix64::new(42);
        let mut drop = Dropout::new(0.3);
        let n = 10_000;
        let x = Tensor::filled(vec![1, n], 1.0);
        let y = drop.forward(&x, &mut Pass { mode: Mode::Train, rng: &mut rng });
        let mean = y.data.iter().sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < 0.02, "mean {mean} drifted more than 2%");
    }
}
