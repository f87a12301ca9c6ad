//! Finite-difference verification of backward passes.

use cardioscope_rng::SplitMix64;

use crate::layer::{Mode, Pass};
use crate::network::Network;
use crate::tensor::Tensor;

#[derive(Debug, Clone)]
pub struct GradCheckConfig {
    /// Fraction of parameters to probe.
    pub fraction: f64,
    /// Hard cap on probed parameters (keeps large networks affordable).
    pub max_params: Option<usize>,
    /// Central-difference step.
    pub h: f64,
    /// Seed for probe selection and for freezing stochastic layers: every
    /// forward evaluation replays the same RNG stream, so dropout masks are
    /// identical across the nudged evaluations.
    pub seed: u64,
    /// Also probe the gradient with respect to the network input.
    pub check_input: bool,
}

impl Default for GradCheckConfig {
    fn default() -> Self {
        GradCheckConfig { fraction: 0.05, max_params: None, h: 1e-5, seed: 0x5eed, check_input: true }
    }
}

#[derive(Debug, Clone)]
pub struct GradCheckReport {
    pub params_checked: usize,
    pub inputs_checked: usize,
    pub max_rel_err: f64,
}

impl GradCheckReport {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.max_rel_err < tolerance
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-5)
}

/// Compare analytic gradients against central finite differences on a random
/// sample of parameters (and optionally input elements).
///
/// `loss` maps the network output to (scalar loss, gradient w.r.t. output);
/// it must be deterministic.
pub fn grad_check(
    net: &mut Network,
    input: &Tensor,
    loss: &mut dyn FnMut(&Tensor) -> (f64, Tensor),
    cfg: &GradCheckConfig,
) -> GradCheckReport {
    let forward = |net: &mut Network, x: &Tensor, seed: u64| -> Tensor {
        let mut rng = SplitMix64::new(seed);
        let mut pass = Pass { mode: Mode::Train, rng: &mut rng };
        net.forward(x, &mut pass)
    };

    // Analytic gradients.
    let out = forward(net, input, cfg.seed);
    let (_, grad_out) = loss(&out);
    net.zero_grad();
    let grad_input = net.backward(&grad_out);
    let analytic: Vec<Vec<f64>> = net.params_mut().iter().map(|p| p.grad().to_vec()).collect();

    let sizes: Vec<usize> = analytic.iter().map(|g| g.len()).collect();
    let total: usize = sizes.iter().sum();
    let mut want = if total == 0 {
        0
    } else {
        ((cfg.fraction * total as f64).ceil() as usize).clamp(1, total)
    };
    if let Some(cap) = cfg.max_params {
        want = want.min(cap);
    }

    // Distinct global indices, then mapped back to (param, element).
    let mut pick_rng = SplitMix64::derive(cfg.seed, 1);
    let mut chosen = std::collections::BTreeSet::new();
    while chosen.len() < want {
        chosen.insert(pick_rng.below(total));
    }

    let mut max_rel = 0.0f64;
    for flat in chosen.iter() {
        let mut idx = *flat;
        let mut param = 0;
        while idx >= sizes[param] {
            idx -= sizes[param];
            param += 1;
        }
        let orig = net.params_mut()[param].data[idx];

        net.params_mut()[param].data[idx] = orig + cfg.h;
        let (l_plus, _) = loss(&forward(net, input, cfg.seed));
        net.params_mut()[param].data[idx] = orig - cfg.h;
        let (l_minus, _) = loss(&forward(net, input, cfg.seed));
        net.params_mut()[param].data[idx] = orig;

        let fd = (l_plus - l_minus) / (2.0 * cfg.h);
        max_rel = max_rel.max(rel_err(fd, analytic[param][idx]));
    }

    let mut inputs_checked = 0;
    if cfg.check_input {
        let n = input.numel();
        let sample = want.max(8).min(n);
        let mut set = std::collections::BTreeSet::new();
        while set.len() < sample {
            set.insert(pick_rng.below(n));
        }
        let mut probe = input.clone();
        for &i in &set {
            let orig = probe.data[i];
            probe.data[i] = orig + cfg.h;
            let (l_plus, _) = loss(&forward(net, &probe, cfg.seed));
            probe.data[i] = orig - cfg.h;
            let (l_minus, _) = loss(&forward(net, &probe, cfg.seed));
            probe.data[i] = orig;
            let fd = (l_plus - l_minus) / (2.0 * cfg.h);
            max_rel = max_rel.max(rel_err(fd, grad_input.data[i]));
        }
        inputs_checked = sample;
    }

    GradCheckReport { params_checked: want, inputs_checked, max_rel_err: max_rel }
}
