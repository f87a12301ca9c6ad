//! Adam optimizer with bias correction.

use crate::network::Network;

#[derive(Debug, Clone)]
pub struct Adam {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    step: u64,
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
}

impl Adam {
    pub fn new(lr: f64, beta1: f64, beta2: f64) -> Self {
        Adam { lr, beta1, beta2, eps: 1e-8, step: 0, m: Vec::new(), v: Vec::new() }
    }

    /// Defaults used outside GAN training.
    pub fn standard(lr: f64) -> Self {
        Adam::new(lr, 0.9, 0.999)
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    /// Apply one update to every parameter of the network, consuming the
    /// accumulated gradients (they are not cleared; call `zero_grad` next).
    pub fn step(&mut self, net: &mut Network) {
        let mut params = net.params_mut();
        if self.m.is_empty() {
            self.m = params.iter().map(|p| vec![0.0; p.numel()]).collect();
            self.v = params.iter().map(|p| vec![0.0; p.numel()]).collect();
        }
        assert_eq!(self.m.len(), params.len(), "optimizer bound to a different network");
        self.step += 1;
        let t = self.step as f64;
        let bc1 = 1.0 - self.beta1.powf(t);
        let bc2 = 1.0 - self.beta2.powf(t);
        for (idx, p) in params.iter_mut().enumerate() {
            let g_owned: Vec<f64> = p.grad().to_vec();
            let m = &mut self.m[idx];
            let v = &mut self.v[idx];
            for i in 0..g_owned.len() {
                let g = g_owned[i];
                m[i] = self.beta1 * m[i] + (1.0 - self.beta1) * g;
                v[i] = self.beta2 * v[i] + (1.0 - self.beta2) * g * g;
                let mhat = m[i] / bc1;
                let vhat = v[i] / bc2;
                p.data[i] -= self.lr * mhat / (vhat.sqrt() + self.eps);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layer::LayerSpec;
    use crate::loss::mse;
    use crate::tensor::Tensor;

    fn quadratic_net() -> Network {
        // One dense layer, identity-ish: minimizing ||Wx - 0||^2 drives W to 0.
        Network::from_specs(&[LayerSpec::Dense { in_features: 2, out_features: 1 }], 5).unwrap()
    }

    #[test]
    fn zero_lr_means_no_update() {
        let mut net = quadratic_net();
        let before = net.export_state();
        let mut adam = Adam::new(0.0, 0.9, 0.999);
        let x = Tensor::new(vec![1, 2], vec![1.0, -2.0]);
        let y = net.infer(&x);
        let (_, grad) = mse(&y, &Tensor::zeros(vec![1, 1]));
        net.backward(&grad);
        adam.step(&mut net);
        assert_eq!(before, net.export_state());
    }

    #[test]
    fn single_step_descends_quadratic() {
        // f(w) = w^2 from w = 1: one Adam step moves toward zero.
        let mut net = quadratic_net();
        {
            let mut params = net.params_mut();
            params[0].data.copy_from_slice(&[1.0, 0.0]);
            params[1].data.copy_from_slice(&[0.0]);
        }
        let x = Tensor::new(vec![1, 2], vec![1.0, 0.0]);
        let mut adam = Adam::standard(0.1);
        let y = net.infer(&x);
        let (_, grad) = mse(&y, &Tensor::zeros(vec![1, 1]));
        net.zero_grad();
        net.backward(&grad);
        adam.step(&mut net);
        let w = net.params_mut()[0].data[0];
        assert!(w < 1.0 && w > 0.0, "w = {w}");
    }

    #[test]
    fn converges_on_2d_quadratic() {
        let mut net = quadratic_net();
        let mut adam = Adam::standard(0.05);
        let x = Tensor::new(vec![2, 2], vec![1.0, 0.0, 0.0, 1.0]);
        let target = Tensor::zeros(vec![2, 1]);
        let mut grad_norm = f64::MAX;
        for _ in 0..200 {
            let y = net.infer(&x);
            let (_, grad) = mse(&y, &target);
            net.zero_grad();
            net.backward(&grad);
            grad_norm = net.params_mut().iter().flat_map(|p| p.grad().iter()).map(|g| g * g).sum::<f64>().sqrt();
            adam.step(&mut net);
        }
        assert!(grad_norm < 1e-3, "|grad| = {grad_norm}");
    }
}
