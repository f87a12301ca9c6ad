//! Pointwise activations.

use crate::layer::{Layer, LayerSpec, Pass};
use crate::tensor::Tensor;

macro_rules! pointwise_layer {
    ($name:ident, $spec:expr, |$x:ident| $fwd:expr, |$xin:ident, $y:ident| $dfn:expr) => {
        pub struct $name {
            cached_input: Option<Tensor>,
            cached_output: Option<Tensor>,
        }

        impl $name {
            #[allow(clippy::new_without_default)]
            pub fn new() -> Self {
                Self { cached_input: None, cached_output: None }
            }
        }

        impl Layer for $name {
            fn forward(&mut self, input: &Tensor, _pass: &mut Pass) -> Tensor {
                let mut out = input.clone();
                out.data.iter_mut().for_each(|v| {
                    let $x = *v;
                    *v = $fwd;
                });
                self.cached_input = Some(input.clone());
                self.cached_output = Some(out.clone());
                out
            }

            fn backward(&mut self, grad_out: &Tensor) -> Tensor {
                let input = self.cached_input.as_ref().expect("backward before forward");
                let output = self.cached_output.as_ref().unwrap();
                let mut grad_in = grad_out.clone();
                for ((g, &$xin), &$y) in grad_in.data.iter_mut().zip(&input.data).zip(&output.data) {
                    *g *= $dfn;
                }
                grad_in
            }

            fn spec(&self) -> LayerSpec {
                $spec
            }
        }
    };
}

pointwise_layer!(Relu, LayerSpec::Relu, |x| x.max(0.0), |xin, _y| if xin > 0.0 { 1.0 } else { 0.0 });
pointwise_layer!(Sigmoid, LayerSpec::Sigmoid, |x| 1.0 / (1.0 + (-x).exp()), |_xin, y| y * (1.0 - y));
pointwise_layer!(Tanh, LayerSpec::Tanh, |x| x.tanh(), |_xin, y| 1.0 - y * y);

/// Leaky ReLU with configurable negative slope.
pub struct LeakyRelu {
    slope: f64,
    cached_input: Option<Tensor>,
}

impl LeakyRelu {
    pub fn new(slope: f64) -> Self {
        LeakyRelu { slope, cached_input: None }
    }
}

impl Layer for LeakyRelu {
    fn forward(&mut self, input: &Tensor, _pass: &mut Pass) -> Tensor {
        let mut out = input.clone();
        let s = self.slope;
        out.data.iter_mut().for_each(|v| {
            if *v < 0.0 {
                *v *= s;
            }
        });
        self.cached_input = Some(input.clone());
        out
    }

    fn backward(&mut self, grad_out: &Tensor) -> Tensor {
        let input = self.cached_input.as_ref().expect("backward before forward");
        let mut grad_in = grad_out.clone();
        for (g, &x) in grad_in.data.iter_mut().zip(&input.data) {
            if x < 0.0 {
                *g *= self.slope;
            }
        }
        grad_in
    }

    fn spec(&self) -> LayerSpec {
        LayerSpec::LeakyRelu { slope: self.slope }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layer::Mode;
    use cardioscope_rng::SplitMix64;

    #[test]
    fn activation_values() {
        let mut rng = SplitMix64::new(0);
        let mut pass = Pass { mode: Mode::Train, rng: &mut rng };
        let x = Tensor::new(vec![1, 4], vec![-2.0, -0.5, 0.0, 1.5]);

        let y = Relu::new().forward(&x, &mut pass);
        assert_eq!(y.data, vec![0.0, 0.0, 0.0, 1.5]);

        let y = LeakyRelu::new(0.2).forward(&x, &mut pass);
        assert_eq!(y.data, vec![-0.4, -0.1, 0.0, 1.5]);

        let y = Sigmoid::new().forward(&x, &mut pass);
        assert!((y.data[2] - 0.5).abs() < 1e-15);

        let y = Tanh::new().forward(&x, &mut pass);
        assert!((y.data[3] - 1.5f64.tanh()).abs() < 1e-15);
    }
}
