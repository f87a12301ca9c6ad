//! Pooling, upsampling and padding layers.

use crate::layer::{windowed_len, Layer, LayerSpec, Pass};
use crate::tensor::Tensor;

/// Max pooling with argmax routing in backward; ties go to the first maximum.
pub struct MaxPool1d {
    kernel: usize,
    stride: usize,
    cached_argmax: Vec<usize>,
    cached_in_shape: Vec<usize>,
}

impl MaxPool1d {
    pub fn new(kernel: usize, stride: usize) -> Self {
        assert!(kernel >= 1 && stride >= 1);
        MaxPool1d { kernel, stride, cached_argmax: Vec::new(), cached_in_shape: Vec::new() }
    }
}

impl Layer for MaxPool1d {
    fn forward(&mut self, input: &Tensor, _pass: &mut Pass) -> Tensor {
        let (batch, ch, len) = (input.shape[0], input.shape[1], input.shape[2]);
        let out_len = windowed_len(len, self.kernel, self.stride);
        let mut out = Tensor::zeros(vec![batch, ch, out_len]);
        self.cached_argmax = vec![0; batch * ch * out_len];
        for bc in 0..batch * ch {
            let row = &input.data[bc * len..][..len];
            for j in 0..out_len {
                let start = j * self.stride;
                let mut best = start;
                for t in start + 1..start + self.kernel {
                    if row[t] > row[best] {
                        best = t;
                    }
                }
                out.data[bc * out_len + j] = row[best];
                self.cached_argmax[bc * out_len + j] = best;
            }
        }
        self.cached_in_shape = input.shape.clone();
        out
    }

    fn backward(&mut self, grad_out: &Tensor) -> Tensor {
        let len = self.cached_in_shape[2];
        let out_len = grad_out.shape[2];
        let mut grad_in = Tensor::zeros(self.cached_in_shape.clone());
        for bc in 0..grad_out.shape[0] * grad_out.shape[1] {
            for j in 0..out_len {
                let src = self.cached_argmax[bc * out_len + j];
                grad_in.data[bc * len + src] += grad_out.data[bc * out_len + j];
            }
        }
        grad_in
    }

    fn spec(&self) -> LayerSpec {
        LayerSpec::MaxPool1d { kernel: self.kernel, stride: self.stride }
    }
}

/// Nearest-neighbour upsampling: each element repeated `factor` times.
pub struct Upsample1d {
    factor: usize,
    cached_in_shape: Vec<usize>,
}

impl Upsample1d {
    pub fn new(factor: usize) -> Self {
        assert!(factor >= 1);
        Upsample1d { factor, cached_in_shape: Vec::new() }
    }
}

impl Layer for Upsample1d {
    fn forward(&mut self, input: &Tensor, _pass: &mut Pass) -> Tensor {
        let (batch, ch, len) = (input.shape[0], input.shape[1], input.shape[2]);
        let out_len = len * self.factor;
        let mut out = Tensor::zeros(vec![batch, ch, out_len]);
        for bc in 0..batch * ch {
            for i in 0..len {
                let v = input.data[bc * len + i];
                for t in 0..self.factor {
                    out.data[bc * out_len + i * self.factor + t] = v;
                }
            }
        }
        self.cached_in_shape = input.shape.clone();
        out
    }

    fn backward(&mut self, grad_out: &Tensor) -> Tensor {
        let len = self.cached_in_shape[2];
        let out_len = len * self.factor;
        let mut grad_in = Tensor::zeros(self.cached_in_shape.clone());
        for bc in 0..grad_out.shape[0] * grad_out.shape[1] {
            for i in 0..len {
                let mut acc = 0.0;
                for t in 0..self.factor {
                    acc += grad_out.data[bc * out_len + i * self.factor + t];
                }
                grad_in.data[bc * len + i] = acc;
            }
        }
        grad_in
    }

    fn spec(&self) -> LayerSpec {
        LayerSpec::Upsample1d { factor: self.factor }
    }
}

/// Adaptive average pooling; only global pooling (output size 1) is needed.
pub struct AdaptiveAvgPool1d {
    cached_in_shape: Vec<usize>,
}

impl AdaptiveAvgPool1d {
    pub fn new(output: usize) -> Self {
        assert_eq!(output, 1, "only global average pooling is supported");
        AdaptiveAvgPool1d { cached_in_shape: Vec::new() }
    }
}

impl Layer for AdaptiveAvgPool1d {
    fn forward(&mut self, input: &Tensor, _pass: &mut Pass) -> Tensor {
        let (batch, ch, len) = (input.shape[0], input.shape[1], input.shape[2]);
        let mut out = Tensor::zeros(vec![batch, ch, 1]);
        for bc in 0..batch * ch {
            out.data[bc] = input.data[bc * len..][..len].iter().sum::<f64>() / len as f64;
        }
        self.cached_in_shape = input.shape.clone();
        out
    }

    fn backward(&mut self, grad_out: &Tensor) -> Tensor {
        let len = self.cached_in_shape[2];
        let mut grad_in = Tensor::zeros(self.cached_in_shape.clone());
        for bc in 0..grad_out.shape[0] * grad_out.shape[1] {
            let g = grad_out.data[bc] / len as f64;
            grad_in.data[bc * len..][..len].iter_mut().for_each(|v| *v = g);
        }
        grad_in
    }

    fn spec(&self) -> LayerSpec {
        LayerSpec::AdaptiveAvgPool1d { output: 1 }
    }
}

/// Zero padding along the sequence axis.
pub struct ZeroPad1d {
    left: usize,
    right: usize,
    cached_in_shape: Vec<usize>,
}

impl ZeroPad1d {
    pub fn new(left: usize, right: usize) -> Self {
        ZeroPad1d { left, right, cached_in_shape: Vec::new() }
    }
}

impl Layer for ZeroPad1d {
    fn forward(&mut self, input: &Tensor, _pass: &mut Pass) -> Tensor {
        let (batch, ch, len) = (input.shape[0], input.shape[1], input.shape[2]);
        let out_len = len + self.left + self.right;
        let mut out = Tensor::zeros(vec![batch, ch, out_len]);
        for bc in 0..batch * ch {
            out.data[bc * out_len + self.left..][..len]
                .copy_from_slice(&input.data[bc * len..][..len]);
        }
        self.cached_in_shape = input.shape.clone();
        out
    }

    fn backward(&mut self, grad_out: &Tensor) -> Tensor {
        let len = self.cached_in_shape[2];
        let out_len = len + self.left + self.right;
        let mut grad_in = Tensor::zeros(self.cached_in_shape.clone());
        for bc in 0..grad_out.shape[0] * grad_out.shape[1] {
            grad_in.data[bc * len..][..len]
                .copy_from_slice(&grad_out.data[bc * out_len + self.left..][..len]);
        }
        grad_in
    }

    fn spec(&self) -> LayerSpec {
        LayerSpec::ZeroPad1d { left: self.left, right: self.right }
    }
}
