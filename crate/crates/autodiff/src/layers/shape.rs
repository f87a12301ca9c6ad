//! Shape adapters: flatten and reshape.

use crate::layer::{Layer, LayerSpec, Pass};
use crate::tensor::Tensor;

/// Collapse [batch, channels, length] to [batch, channels*length].
pub struct Flatten {
    cached_in_shape: Vec<usize>,
}

impl Flatten {
    #[allow(clippy::new_without_default)]
    pub fn new() -> Self {
        Flatten { cached_in_shape: Vec::new() }
    }
}

impl Layer for Flatten {
    fn forward(&mut self, input: &Tensor, _pass: &mut Pass) -> Tensor {
        let batch = input.shape[0];
        let rest: usize = input.shape[1..].iter().product();
        self.cached_in_shape = input.shape.clone();
        Tensor::new(vec![batch, rest], input.data.clone())
    }

    fn backward(&mut self, grad_out: &Tensor) -> Tensor {
        Tensor::new(self.cached_in_shape.clone(), grad_out.data.clone())
    }

    fn spec(&self) -> LayerSpec {
        LayerSpec::Flatten
    }
}

/// Expand [batch, channels*length] to [batch, channels, length].
pub struct Reshape {
    channels: usize,
    length: usize,
}

impl Reshape {
    pub fn new(channels: usize, length: usize) -> Self {
        Reshape { channels, length }
    }
}

impl Layer for Reshape {
    fn forward(&mut self, input: &Tensor, _pass: &mut Pass) -> Tensor {
        let batch = input.shape[0];
        let rest: usize = input.shape[1..].iter().product();
        assert_eq!(rest, self.channels * self.length, "reshape size mismatch");
        Tensor::new(vec![batch, self.channels, self.length], input.data.clone())
    }

    fn backward(&mut self, grad_out: &Tensor) -> Tensor {
        let batch = grad_out.shape[0];
        Tensor::new(vec![batch, self.channels * self.length], grad_out.data.clone())
    }

    fn spec(&self) -> LayerSpec {
        LayerSpec::Reshape { channels: self.channels, length: self.length }
    }
}
