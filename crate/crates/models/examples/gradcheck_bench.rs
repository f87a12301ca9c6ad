//! Timing probe for full-scale finite-difference checks (not part of the suite).

use cardioscope_autodiff::gradcheck::{grad_check, GradCheckConfig};
use cardioscope_autodiff::loss::mse;
use cardioscope_autodiff::network::Network;
use cardioscope_autodiff::tensor::Tensor;
use cardioscope_models::gan::GanArch;
use cardioscope_rng::SplitMix64;
use std::time::Instant;

fn main() {
    let arch = GanArch::full();
    let mut rng = SplitMix64::new(1);

    let t = Instant::now();
    let mut g = Network::from_specs(&arch.g_specs, 2).unwrap();
    let z = Tensor::new(vec![2, arch.z_dim], (0..2 * arch.z_dim).map(|_| rng.normal()).collect());
    let fake = g.infer(&z);
    println!("G forward (batch 2): {:.2?}", t.elapsed());

    let mut d = Network::from_specs(&arch.d_specs, 3).unwrap();
    let t = Instant::now();
    let _ = d.infer(&fake);
    println!("D forward (batch 2): {:.2?}", t.elapsed());

    // Grad-check D with a small parameter sample.
    let x = Tensor::new(vec![2, 1, 4987], (0..2 * 4987).map(|_| rng.normal() * 0.3).collect());
    let target = Tensor::zeros(vec![2, 2]);
    let mut loss = |out: &Tensor| mse(out, &target);
    let cfg = GradCheckConfig { fraction: 1.0, max_params: Some(12), seed: 5, check_input: false, ..Default::default() };
    let t = Instant::now();
    let report = grad_check(&mut d, &x, &mut loss, &cfg);
    println!("D grad check (12 params): {:.2?}, max rel err {:.3e}", t.elapsed(), report.max_rel_err);

    let target = Tensor::zeros(vec![2, 1, 4987]);
    let mut loss = |out: &Tensor| mse(out, &target);
    let t = Instant::now();
    let report = grad_check(&mut g, &z, &mut loss, &cfg);
    println!("G grad check (12 params): {:.2?}, max rel err {:.3e}", t.elapsed(), report.max_rel_err);
}
