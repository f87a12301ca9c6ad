//! 1D convolution and transposed convolution (cross-correlation convention).

use rayon::prelude::*;

use crate::layer::{transposed_len, Layer, LayerSpec, Padding, Pass};
use crate::tensor::Tensor;

#[inline]
fn axpy(out: &mut [f64], a: f64, x: &[f64]) {
    for (o, xi) in out.iter_mut().zip(x) {
        *o += a * xi;
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// 1D convolution over [batch, channels, length] tensors.
///
/// Weight layout is [c_out, c_in, kernel]; no kernel flip is applied, so an
/// identity kernel (single 1) reproduces the input.
pub struct Conv1d {
    weight: Tensor,
    bias: Tensor,
    in_channels: usize,
    out_channels: usize,
    kernel: usize,
    stride: usize,
    padding: Padding,
    cached_padded: Option<Tensor>,
    cached_out_len: usize,
}

impl Conv1d {
    pub fn new(weight: Tensor, bias: Tensor, stride: usize, padding: Padding) -> Self {
        let (c_out, c_in, kernel) = (weight.shape[0], weight.shape[1], weight.shape[2]);
        bias.assert_shape(&[c_out]);
        if padding == Padding::Same {
            assert_eq!(stride, 1, "same padding requires stride 1");
        }
        Conv1d {
            weight: weight.into_param(),
            bias: bias.into_param(),
            in_channels: c_in,
            out_channels: c_out,
            kernel,
            stride,
            padding,
            cached_padded: None,
            cached_out_len: 0,
        }
    }

    fn pad_amounts(&self) -> (usize, usize) {
        match self.padding {
            Padding::Valid => (0, 0),
            Padding::Same => {
                let total = self.kernel - 1;
                (total / 2, total - total / 2)
            }
        }
    }
}

impl Layer for Conv1d {
    fn forward(&mut self, input: &Tensor, _pass: &mut Pass) -> Tensor {
        assert_eq!(input.shape.len(), 3, "conv1d expects [batch, channels, length]");
        let (batch, c_in, len) = (input.shape[0], input.shape[1], input.shape[2]);
        assert_eq!(c_in, self.in_channels, "channel mismatch");
        let (pl, pr) = self.pad_amounts();
        let padded_len = len + pl + pr;
        assert!(padded_len >= self.kernel, "input length {len} too short for kernel {}", self.kernel);
        let out_len = (padded_len - self.kernel) / self.stride + 1;

        let mut padded = Tensor::zeros(vec![batch, c_in, padded_len]);
        for b in 0..batch {
            for c in 0..c_in {
                let src = &input.data[(b * c_in + c) * len..][..len];
                let dst = &mut padded.data[(b * c_in + c) * padded_len + pl..][..len];
                dst.copy_from_slice(src);
            }
        }

        let mut out = Tensor::zeros(vec![batch, self.out_channels, out_len]);
        let (c_out, k, s) = (self.out_channels, self.kernel, self.stride);
        let w = &self.weight.data;
        let bias = &self.bias.data;
        let pdata = &padded.data;
        out.data.par_chunks_mut(out_len).enumerate().for_each(|(idx, row)| {
            let b = idx / c_out;
            let co = idx % c_out;
            row.fill(bias[co]);
            for ci in 0..c_in {
                let in_row = &pdata[(b * c_in + ci) * padded_len..][..padded_len];
                let w_row = &w[(co * c_in + ci) * k..][..k];
                if s == 1 {
                    for (t, &wt) in w_row.iter().enumerate() {
                        axpy(row, wt, &in_row[t..t + out_len]);
                    }
                } else {
                    for (j, o) in row.iter_mut().enumerate() {
                        *o += dot(w_row, &in_row[j * s..][..k]);
                    }
                }
            }
        });

        self.cached_padded = Some(padded);
        self.cached_out_len = out_len;
        out
    }

    fn backward(&mut self, grad_out: &Tensor) -> Tensor {
        let padded = self.cached_padded.as_ref().expect("backward before forward");
        let (batch, c_in, padded_len) = (padded.shape[0], padded.shape[1], padded.shape[2]);
        let (c_out, k, s) = (self.out_channels, self.kernel, self.stride);
        let out_len = self.cached_out_len;
        grad_out.assert_shape(&[batch, c_out, out_len]);
        let (pl, pr) = self.pad_amounts();
        let len = padded_len - pl - pr;

        // Bias gradient.
        {
            let gb = self.bias.grad_mut();
            for b in 0..batch {
                for co in 0..c_out {
                    gb[co] += grad_out.data[(b * c_out + co) * out_len..][..out_len].iter().sum::<f64>();
                }
            }
        }

        // Weight gradient: each output channel's slice is independent.
        {
            let pdata = &padded.data;
            let gdata = &grad_out.data;
            self.weight
                .grad
                .as_deref_mut()
                .unwrap()
                .par_chunks_mut(c_in * k)
                .enumerate()
                .for_each(|(co, gw_row)| {
                    for b in 0..batch {
                        let g_row = &gdata[(b * c_out + co) * out_len..][..out_len];
                        for ci in 0..c_in {
                            let in_row = &pdata[(b * c_in + ci) * padded_len..][..padded_len];
                            for t in 0..k {
                                gw_row[ci * k + t] += if s == 1 {
                                    dot(g_row, &in_row[t..t + out_len])
                                } else {
                                    g_row
                                        .iter()
                                        .enumerate()
                                        .map(|(j, &g)| g * in_row[j * s + t])
                                        .sum::<f64>()
                                };
                            }
                        }
                    }
                });
        }

        // Input gradient (computed in padded coordinates, then cropped).
        let mut grad_padded = Tensor::zeros(vec![batch, c_in, padded_len]);
        {
            let w = &self.weight.data;
            let gdata = &grad_out.data;
            grad_padded.data.par_chunks_mut(padded_len).enumerate().for_each(|(idx, gin_row)| {
                let b = idx / c_in;
                let ci = idx % c_in;
                for co in 0..c_out {
                    let g_row = &gdata[(b * c_out + co) * out_len..][..out_len];
                    let w_row = &w[(co * c_in + ci) * k..][..k];
                    if s == 1 {
                        for (t, &wt) in w_row.iter().enumerate() {
                            axpy(&mut gin_row[t..t + out_len], wt, g_row);
                        }
                    } else {
                        for (j, &g) in g_row.iter().enumerate() {
                            for (t, &wt) in w_row.iter().enumerate() {
                                gin_row[j * s + t] += wt * g;
                            }
                        }
                    }
                }
            });
        }

        let mut grad_in = Tensor::zeros(vec![batch, c_in, len]);
        for b in 0..batch {
            for c in 0..c_in {
                let src = &grad_padded.data[(b * c_in + c) * padded_len + pl..][..len];
                grad_in.data[(b * c_in + c) * len..][..len].copy_from_slice(src);
            }
        }
        grad_in
    }

    fn params_mut(&mut self) -> Vec<(&'static str, &mut Tensor)> {
        vec![("weight", &mut self.weight), ("bias", &mut self.bias)]
    }

    fn spec(&self) -> LayerSpec {
        LayerSpec::Conv1d {
            in_channels: self.in_channels,
            out_channels: self.out_channels,
            kernel: self.kernel,
            stride: self.stride,
            padding: self.padding,
        }
    }
}

/// Transposed 1D convolution. Weight layout is [c_in, c_out, kernel];
/// output length is (len-1)*stride + kernel - 2*padding.
pub struct ConvTranspose1d {
    weight: Tensor,
    bias: Tensor,
    in_channels: usize,
    out_channels: usize,
    kernel: usize,
    stride: usize,
    padding: usize,
    cached_input: Option<Tensor>,
}

impl ConvTranspose1d {
    pub fn new(weight: Tensor, bias: Tensor, stride: usize, padding: usize) -> Self {
        let (c_in, c_out, kernel) = (weight.shape[0], weight.shape[1], weight.shape[2]);
        bias.assert_shape(&[c_out]);
        assert!(stride >= 1);
        assert!(2 * padding < kernel, "padding must be smaller than kernel/2");
        ConvTranspose1d {
            weight: weight.into_param(),
            bias: bias.into_param(),
            in_channels: c_in,
            out_channels: c_out,
            kernel,
            stride,
            padding,
            cached_input: None,
        }
    }
}

impl Layer for ConvTranspose1d {
    fn forward(&mut self, input: &Tensor, _pass: &mut Pass) -> Tensor {
        assert_eq!(input.shape.len(), 3, "conv_transpose1d expects [batch, channels, length]");
        let (batch, c_in, len) = (input.shape[0], input.shape[1], input.shape[2]);
        assert_eq!(c_in, self.in_channels, "channel mismatch");
        let (c_out, k, s, p) = (self.out_channels, self.kernel, self.stride, self.padding);
        let full_len = (len - 1) * s + k;
        let out_len = transposed_len(len, k, s, p);

        let mut out = Tensor::zeros(vec![batch, c_out, out_len]);
        let w = &self.weight.data;
        let bias = &self.bias.data;
        let idata = &input.data;
        out.data.par_chunks_mut(out_len).enumerate().for_each(|(idx, row)| {
            let b = idx / c_out;
            let co = idx % c_out;
            let mut full = vec![0.0; full_len];
            for ci in 0..c_in {
                let in_row = &idata[(b * c_in + ci) * len..][..len];
                let w_row = &w[(ci * c_out + co) * k..][..k];
                for (i, &x) in in_row.iter().enumerate() {
                    axpy(&mut full[i * s..i * s + k], x, w_row);
                }
            }
            for (j, o) in row.iter_mut().enumerate() {
                *o = full[j + p] + bias[co];
            }
        });

        self.cached_input = Some(input.clone());
        out
    }

    fn backward(&mut self, grad_out: &Tensor) -> Tensor {
        let input = self.cached_input.as_ref().expect("backward before forward");
        let (batch, c_in, len) = (input.shape[0], input.shape[1], input.shape[2]);
        let (c_out, k, s, p) = (self.out_channels, self.kernel, self.stride, self.padding);
        let full_len = (len - 1) * s + k;
        let out_len = transposed_len(len, k, s, p);
        grad_out.assert_shape(&[batch, c_out, out_len]);

        // Re-embed the output gradient into unpadded coordinates.
        let mut gfull = vec![0.0; batch * c_out * full_len];
        for b in 0..batch {
            for co in 0..c_out {
                let src = &grad_out.data[(b * c_out + co) * out_len..][..out_len];
                gfull[(b * c_out + co) * full_len + p..][..out_len].copy_from_slice(src);
            }
        }

        {
            let gb = self.bias.grad_mut();
            for b in 0..batch {
                for co in 0..c_out {
                    gb[co] += grad_out.data[(b * c_out + co) * out_len..][..out_len].iter().sum::<f64>();
                }
            }
        }

        {
            let idata = &input.data;
            self.weight
                .grad
                .as_deref_mut()
                .unwrap()
                .par_chunks_mut(c_out * k)
                .enumerate()
                .for_each(|(ci, gw_row)| {
                    for b in 0..batch {
                        let in_row = &idata[(b * c_in + ci) * len..][..len];
                        for co in 0..c_out {
                            let g_row = &gfull[(b * c_out + co) * full_len..][..full_len];
                            for t in 0..k {
                                let mut acc = 0.0;
                                for (i, &x) in in_row.iter().enumerate() {
                                    acc += x * g_row[i * s + t];
                                }
                                gw_row[co * k + t] += acc;
                            }
                        }
                    }
                });
        }

        let mut grad_in = Tensor::zeros(vec![batch, c_in, len]);
        {
            let w = &self.weight.data;
            grad_in.data.par_chunks_mut(len).enumerate().for_each(|(idx, gin_row)| {
                let b = idx / c_in;
                let ci = idx % c_in;
                for co in 0..c_out {
                    let g_row = &gfull[(b * c_out + co) * full_len..][..full_len];
                    let w_row = &w[(ci * c_out + co) * k..][..k];
                    for (i, gi) in gin_row.iter_mut().enumerate() {
                        *gi += dot(w_row, &g_row[i * s..i * s + k]);
                    }
                }
            });
        }
        grad_in
    }

    fn params_mut(&mut self) -> Vec<(&'static str, &mut Tensor)> {
        vec![("weight", &mut self.weight), ("bias", &mut self.bias)]
    }

    fn spec(&self) -> LayerSpec {
        LayerSpec::ConvTranspose1d {
            in_channels: self.in_channels,
            out_channels: self.out_channels,
            kernel: self.kernel,
            stride: self.stride,
            padding: self.padding,
        }
    }
}
