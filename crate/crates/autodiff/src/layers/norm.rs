//! Batch normalization.

use crate::layer::{Layer, LayerSpec, Mode, Pass};
use crate::tensor::Tensor;

const BN_EPS: f64 = 1e-5;
const BN_MOMENTUM: f64 = 0.9;

/// Per-channel batch normalization with learned scale and shift.
///
/// Accepts [batch, features] or [batch, channels, length] input; statistics
/// are taken over every element that shares a channel. Running statistics
/// (momentum 0.9) are used in eval mode.
pub struct BatchNorm1d {
    gamma: Tensor,
    beta: Tensor,
    running_mean: Vec<f64>,
    running_var: Vec<f64>,
    features: usize,
    cached: Option<BnCache>,
}

struct BnCache {
    xhat: Vec<f64>,
    inv_std: Vec<f64>,
    in_shape: Vec<usize>,
    train_mode: bool,
}

impl BatchNorm1d {
    pub fn new(features: usize) -> Self {
        BatchNorm1d {
            gamma: Tensor::filled(vec![features], 1.0).into_param(),
            beta: Tensor::zeros(vec![features]).into_param(),
            running_mean: vec![0.0; features],
            running_var: vec![1.0; features],
            features,
            cached: None,
        }
    }

    /// Iterate (channel, flat index) pairs for either supported layout.
    fn layout(shape: &[usize]) -> (usize, usize, usize) {
        match shape.len() {
            2 => (shape[0], shape[1], 1),
            3 => (shape[0], shape[1], shape[2]),
            _ => panic!("batchnorm1d expects 2-d or 3-d input, got {shape:?}"),
        }
    }
}

impl Layer for BatchNorm1d {
    fn forward(&mut self, input: &Tensor, pass: &mut Pass) -> Tensor {
        let (batch, ch, len) = Self::layout(&input.shape);
        assert_eq!(ch, self.features, "channel mismatch");
        let train = pass.mode == Mode::Train;
        if train {
            assert!(batch >= 2, "batchnorm train mode needs batch >= 2");
        }
        let n = (batch * len) as f64;

        let mut mean = vec![0.0; ch];
        let mut var = vec![0.0; ch];
        if train {
            for b in 0..batch {
                for c in 0..ch {
                    let row = &input.data[(b * ch + c) * len..][..len];
                    mean[c] += row.iter().sum::<f64>();
                }
            }
            mean.iter_mut().for_each(|m| *m /= n);
            for b in 0..batch {
                for c in 0..ch {
                    let row = &input.data[(b * ch + c) * len..][..len];
                    var[c] += row.iter().map(|&x| (x - mean[c]) * (x - mean[c])).sum::<f64>();
                }
            }
            var.iter_mut().for_each(|v| *v /= n);
            for c in 0..ch {
                self.running_mean[c] = BN_MOMENTUM * self.running_mean[c] + (1.0 - BN_MOMENTUM) * mean[c];
                self.running_var[c] = BN_MOMENTUM * self.running_var[c] + (1.0 - BN_MOMENTUM) * var[c];
            }
        } else {
            mean.copy_from_slice(&self.running_mean);
            var.copy_from_slice(&self.running_var);
        }

        let inv_std: Vec<f64> = var.iter().map(|&v| 1.0 / (v + BN_EPS).sqrt()).collect();
        let mut out = Tensor::zeros(input.shape.clone());
        let mut xhat = vec![0.0; input.numel()];
        for b in 0..batch {
            for c in 0..ch {
                let base = (b * ch + c) * len;
                for i in 0..len {
                    let h = (input.data[base + i] - mean[c]) * inv_std[c];
                    xhat[base + i] = h;
                    out.data[base + i] = self.gamma.data[c] * h + self.beta.data[c];
                }
            }
        }
        self.cached = Some(BnCache { xhat, inv_std, in_shape: input.shape.clone(), train_mode: train });
        out
    }

    fn backward(&mut self, grad_out: &Tensor) -> Tensor {
        let cache = self.cached.as_ref().expect("backward before forward");
        let (batch, ch, len) = Self::layout(&cache.in_shape);
        grad_out.assert_shape(&cache.in_shape);
        let n = (batch * len) as f64;

        let mut sum_g = vec![0.0; ch];
        let mut sum_gh = vec![0.0; ch];
        for b in 0..batch {
            for c in 0..ch {
                let base = (b * ch + c) * len;
                for i in 0..len {
                    let g = grad_out.data[base + i];
                    sum_g[c] += g;
                    sum_gh[c] += g * cache.xhat[base + i];
                }
            }
        }

        {
            let gg = self.gamma.grad_mut();
            for c in 0..ch {
                gg[c] += sum_gh[c];
            }
            let gb = self.beta.grad_mut();
            for c in 0..ch {
                gb[c] += sum_g[c];
            }
        }

        let mut grad_in = Tensor::zeros(cache.in_shape.clone());
        for b in 0..batch {
            for c in 0..ch {
                let base = (b * ch + c) * len;
                let scale = self.gamma.data[c] * cache.inv_std[c];
                for i in 0..len {
                    let g = grad_out.data[base + i];
                    grad_in.data[base + i] = if cache.train_mode {
                        // Batch statistics are functions of the input.
                        scale * (g - sum_g[c] / n - cache.xhat[base + i] * sum_gh[c] / n)
                    } else {
                        scale * g
                    };
                }
            }
        }
        grad_in
    }

    fn params_mut(&mut self) -> Vec<(&'static str, &mut Tensor)> {
        vec![("gamma", &mut self.gamma), ("beta", &mut self.beta)]
    }

    fn buffers_mut(&mut self) -> Vec<(&'static str, &mut Vec<f64>)> {
        vec![("running_mean", &mut self.running_mean), ("running_var", &mut self.running_var)]
    }

    fn spec(&self) -> LayerSpec {
        LayerSpec::BatchNorm1d { features: self.features }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cardioscope_rng::SplitMix64;

    #[test]
    fn train_mode_standardizes() {
        let mut rng = SplitMix64::new(1);
        let mut bn = BatchNorm1d::new(2);
        let data: Vec<f64> = (0..24).map(|i| (i % 7) as f64 * 1.3 - 2.0).collect();
        let x = Tensor::new(vec![4, 2, 3], data);
        let mut pass = Pass { mode: Mode::Train, rng: &mut rng };
        let y = bn.forward(&x, &mut pass);
        for c in 0..2 {
            let mut vals = Vec::new();
            for b in 0..4 {
                for i in 0..3 {
                    vals.push(y.data[(b * 2 + c) * 3 + i]);
                }
            }
            let mean: f64 = vals.iter().sum::<f64>() / vals.len() as f64;
            let var: f64 = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / vals.len() as f64;
            assert!(mean.abs() < 1e-12, "mean {mean}");
            assert!((var - 1.0).abs() < 1e-3, "var {var}");
        }
    }

    #[test]
    fn eval_mode_uses_running_stats() {
        let mut rng = SplitMix64::new(1);
        let mut bn = BatchNorm1d::new(1);
        bn.running_mean[0] = 2.0;
        bn.running_var[0] = 4.0;
        let x = Tensor::new(vec![1, 1, 2], vec![2.0, 6.0]);
        let mut pass = Pass { mode: Mode::Eval, rng: &mut rng };
        let y = bn.forward(&x, &mut pass);
        let expect = |v: f64| (v - 2.0) / (4.0f64 + BN_EPS).sqrt();
        assert!((y.data[0] - expect(2.0)).abs() < 1e-12);
        assert!((y.data[1] - expect(6.0)).abs() < 1e-12);
    }

    #[test]
    #[should_panic]
    fn train_mode_rejects_batch_of_one() {
        let mut rng = SplitMix64::new(1);
        let mut bn = BatchNorm1d::new(1);
        let x = Tensor::new(vec![1, 1, 3], vec![1.0, 2.0, 3.0]);
        let mut pass = Pass { mode: Mode::Train, rng: &mut rng };
        let _ = bn.forward(&x, &mut pass);
    }
}
