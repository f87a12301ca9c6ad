//! Layer trait and the serializable layer vocabulary.

use cardioscope_rng::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::tensor::Tensor;

/// Forward-pass mode. Train mode uses batch statistics and active dropout;
/// eval mode uses running statistics and identity dropout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Train,
    Eval,
}

/// Per-forward context: mode plus the RNG that stochastic layers draw from.
pub struct Pass<'a> {
    pub mode: Mode,
    pub rng: &'a mut SplitMix64,
}

/// Padding policy for forward convolutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Padding {
    Valid,
    /// Output length equals input length (stride 1 only). Total pad is
    /// kernel-1, split symmetrically with the extra element on the right.
    Same,
}

/// Declarative layer description; the unit of network specs and checkpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LayerSpec {
    Dense { in_features: usize, out_features: usize },
    Conv1d { in_channels: usize, out_channels: usize, kernel: usize, stride: usize, padding: Padding },
    ConvTranspose1d { in_channels: usize, out_channels: usize, kernel: usize, stride: usize, padding: usize },
    MaxPool1d { kernel: usize, stride: usize },
    Upsample1d { factor: usize },
    AdaptiveAvgPool1d { output: usize },
    BatchNorm1d { features: usize },
    Dropout { rate: f64 },
    Relu,
    LeakyRelu { slope: f64 },
    Sigmoid,
    Tanh,
    Flatten,
    Reshape { channels: usize, length: usize },
    ZeroPad1d { left: usize, right: usize },
}

impl LayerSpec {
    /// True for layers that apply a pointwise nonlinearity.
    pub fn is_activation(&self) -> bool {
        matches!(
            self,
            LayerSpec::Relu | LayerSpec::LeakyRelu { .. } | LayerSpec::Sigmoid | LayerSpec::Tanh
        )
    }
}

/// A differentiable network layer. Forward caches whatever backward needs;
/// backward accumulates parameter gradients and returns the input gradient.
/// Shape violations are programming errors and panic.
pub trait Layer: Send {
    fn forward(&mut self, input: &Tensor, pass: &mut Pass) -> Tensor;
    fn backward(&mut self, grad_out: &Tensor) -> Tensor;

    /// Trainable parameters in a fixed order, e.g. [("weight", ..), ("bias", ..)].
    fn params_mut(&mut self) -> Vec<(&'static str, &mut Tensor)> {
        Vec::new()
    }

    /// Non-trainable state (running statistics) persisted in checkpoints.
    fn buffers_mut(&mut self) -> Vec<(&'static str, &mut Vec<f64>)> {
        Vec::new()
    }

    fn spec(&self) -> LayerSpec;
}

/// Output length of a strided window (valid convolution / pooling).
pub fn windowed_len(input: usize, kernel: usize, stride: usize) -> usize {
    assert!(input >= kernel, "input {input} shorter than kernel {kernel}");
    (input - kernel) / stride + 1
}

/// Output length of a transposed convolution.
pub fn transposed_len(input: usize, kernel: usize, stride: usize, padding: usize) -> usize {
    (input - 1) * stride + kernel - 2 * padding
}
