//! Weight initialization.
//!
//! Layers feeding ReLU-family activations use Kaiming-uniform; layers feeding
//! sigmoid/tanh (or nothing) use Xavier-uniform. Biases start at zero.

use cardioscope_rng::SplitMix64;

use crate::tensor::Tensor;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitKind {
    /// Kaiming-uniform with gain sqrt(2) (ReLU) — bound = sqrt(6 / fan_in).
    Kaiming,
    /// Kaiming-uniform with the leaky-ReLU gain sqrt(2 / (1 + slope^2)).
    KaimingLeaky,
    /// Xavier-uniform — bound = sqrt(6 / (fan_in + fan_out)).
    Xavier,
}

const LEAKY_SLOPE: f64 = 0.2;

pub fn init_weight(shape: Vec<usize>, fan_in: usize, fan_out: usize, kind: InitKind, rng: &mut SplitMix64) -> Tensor {
    let bound = match kind {
        InitKind::Kaiming => (6.0 / fan_in as f64).sqrt(),
        InitKind::KaimingLeaky => {
            let gain = (2.0 / (1.0 + LEAKY_SLOPE * LEAKY_SLOPE)).sqrt();
            gain * (3.0 / fan_in as f64).sqrt()
        }
        InitKind::Xavier => (6.0 / (fan_in + fan_out) as f64).sqrt(),
    };
    let n: usize = shape.iter().product();
    let data: Vec<f64> = (0..n).map(|_| rng.uniform_in(-bound, bound)).collect();
    Tensor::new(shape, data)
}
