//! Fully connected layer.

use rayon::prelude::*;

use crate::layer::{Layer, LayerSpec, Pass};
use crate::tensor::Tensor;

/// Dense layer over [batch, in_features] tensors. Weight layout [in, out].
pub struct Dense {
    weight: Tensor,
    bias: Tensor,
    in_features: usize,
    out_features: usize,
    cached_input: Option<Tensor>,
}

impl Dense {
    pub fn new(weight: Tensor, bias: Tensor) -> Self {
        let (n_in, n_out) = (weight.shape[0], weight.shape[1]);
        bias.assert_shape(&[n_out]);
        Dense {
            weight: weight.into_param(),
            bias: bias.into_param(),
            in_features: n_in,
            out_features: n_out,
            cached_input: None,
        }
    }
}

impl Layer for Dense {
    fn forward(&mut self, input: &Tensor, _pass: &mut Pass) -> Tensor {
        assert_eq!(input.shape.len(), 2, "dense expects [batch, features]");
        let (batch, n_in) = (input.shape[0], input.shape[1]);
        assert_eq!(n_in, self.in_features, "feature mismatch");
        let n_out = self.out_features;

        let mut out = Tensor::zeros(vec![batch, n_out]);
        let w = &self.weight.data;
        let bias = &self.bias.data;
        let idata = &input.data;
        out.data.par_chunks_mut(n_out).enumerate().for_each(|(b, row)| {
            row.copy_from_slice(bias);
            let x = &idata[b * n_in..][..n_in];
            for (i, &xi) in x.iter().enumerate() {
                let w_row = &w[i * n_out..][..n_out];
                for (o, &wij) in row.iter_mut().zip(w_row) {
                    *o += xi * wij;
                }
            }
        });

        self.cached_input = Some(input.clone());
        out
    }

    fn backward(&mut self, grad_out: &Tensor) -> Tensor {
        let input = self.cached_input.as_ref().expect("backward before forward");
        let (batch, n_in) = (input.shape[0], input.shape[1]);
        let n_out = self.out_features;
        grad_out.assert_shape(&[batch, n_out]);

        {
            let gb = self.bias.grad_mut();
            for b in 0..batch {
                for (gbo, &g) in gb.iter_mut().zip(&grad_out.data[b * n_out..][..n_out]) {
                    *gbo += g;
                }
            }
        }

        {
            let idata = &input.data;
            let gdata = &grad_out.data;
            self.weight
                .grad
                .as_deref_mut()
                .unwrap()
                .par_chunks_mut(n_out)
                .enumerate()
                .for_each(|(i, gw_row)| {
                    for b in 0..batch {
                        let xi = idata[b * n_in + i];
                        if xi != 0.0 {
                            let g_row = &gdata[b * n_out..][..n_out];
                            for (gw, &g) in gw_row.iter_mut().zip(g_row) {
                                *gw += xi * g;
                            }
                        }
                    }
                });
        }

        let mut grad_in = Tensor::zeros(vec![batch, n_in]);
        let w = &self.weight.data;
        let gdata = &grad_out.data;
        grad_in.data.par_chunks_mut(n_in).enumerate().for_each(|(b, gin_row)| {
            let g_row = &gdata[b * n_out..][..n_out];
            for (i, gi) in gin_row.iter_mut().enumerate() {
                let w_row = &w[i * n_out..][..n_out];
                *gi = w_row.iter().zip(g_row).map(|(wv, gv)| wv * gv).sum();
            }
        });
        grad_in
    }

    fn params_mut(&mut self) -> Vec<(&'static str, &mut Tensor)> {
        vec![("weight", &mut self.weight), ("bias", &mut self.bias)]
    }

    fn spec(&self) -> LayerSpec {
        LayerSpec::Dense { in_features: self.in_features, out_features: self.out_features }
    }
}
