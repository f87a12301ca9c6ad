//! SMO solvers against the independent projected-gradient QP references.

use cardioscope_models::ocsvm::{fit_ocsvm, OcGamma, OcSvmParams};
use cardioscope_models::reference::{kernel_matrix, ocsvm_dual_reference, svm_dual_reference};
use cardioscope_models::svm::{smo_fit_svm, Gamma, SvmParams};
use cardioscope_models::tree::ClassWeights;
use cardioscope_rng::SplitMix64;

fn random_instance(seed: u64, n: usize, d: usize) -> (Vec<Vec<f64>>, Vec<bool>) {
    let mut rng = SplitMix64::new(seed);
    let x: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| rng.normal() * 1.2).collect()).collect();
    let mut y: Vec<bool> = (0..n).map(|_| rng.uniform() < 0.5).collect();
    y[0] = true;
    y[n - 1] = false;
    (x, y)
}

#[test]
fn smo_matches_qp_reference_on_20_instances() {
    for seed in 0..20u64 {
        let n = 6 + (seed as usize % 7); // 6..12 points
        let (x, y) = random_instance(seed, n, 3);
        let gamma = 0.5;
        let c_scalar = 1.5;
        let params = SvmParams {
            c: c_scalar,
            gamma: Gamma::Value(gamma),
            class_weights: ClassWeights::new(1.0, 1.0),
            tol: 1e-8,
        };
        let model = smo_fit_svm(&x, &y, &params).unwrap();

        let k = kernel_matrix(&x, gamma);
        let yv: Vec<f64> = y.iter().map(|&b| if b { 1.0 } else { -1.0 }).collect();
        let (_, oracle_obj) = svm_dual_reference(&k, &yv, &vec![c_scalar; n], 300_000);

        assert!(
            (model.dual_objective - oracle_obj).abs() < 1e-6,
            "seed {seed}: smo {} vs oracle {}",
            model.dual_objective,
            oracle_obj
        );
        assert!(model.equality_residual().abs() < 1e-6, "seed {seed}");
    }
}

#[test]
fn smo_matches_reference_with_class_weights() {
    for seed in 0..5u64 {
        let n = 10;
        let (x, y) = random_instance(100 + seed, n, 3);
        let gamma = 0.7;
        let params = SvmParams {
            c: 0.8,
            gamma: Gamma::Value(gamma),
            class_weights: ClassWeights::new(19.0 / 3.0, 1.0),
            tol: 1e-8,
        };
        let model = smo_fit_svm(&x, &y, &params).unwrap();
        let k = kernel_matrix(&x, gamma);
        let yv: Vec<f64> = y.iter().map(|&b| if b { 1.0 } else { -1.0 }).collect();
        let c: Vec<f64> = y.iter().map(|&b| 0.8 * if b { 19.0 / 3.0 } else { 1.0 }).collect();
        let (_, oracle_obj) = svm_dual_reference(&k, &yv, &c, 300_000);
        assert!(
            (model.dual_objective - oracle_obj).abs() < 1e-6,
            "seed {seed}: smo {} vs oracle {}",
            model.dual_objective,
            oracle_obj
        );
    }
}

#[test]
fn ocsvm_matches_qp_reference_on_random_8_point_sets() {
    for seed in 0..20u64 {
        let n = 8;
        let mut rng = SplitMix64::new(500 + seed);
        let x: Vec<Vec<f64>> = (0..n).map(|_| (0..3).map(|_| rng.normal()).collect()).collect();
        let nu = 0.5;
        let gamma = 0.6;
        let params = OcSvmParams { nu, gamma: OcGamma::Value(gamma), tol: 1e-10 };
        let model = fit_ocsvm(&x, &params).unwrap();

        let k = kernel_matrix(&x, gamma);
        let c = 1.0 / (nu * n as f64);
        let (_, oracle_obj) = ocsvm_dual_reference(&k, c, 200_000);

        assert!(
            (model.dual_objective - oracle_obj).abs() < 1e-6,
            "seed {seed}: solver {} vs oracle {}",
            model.dual_objective,
            oracle_obj
        );
        assert!((model.alpha_sum() - 1.0).abs() < 1e-6, "seed {seed}");
    }
}

#[test]
fn separable_4_point_instance_matches_reference() {
    let x = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![4.0, 4.0], vec![5.0, 4.0]];
    let y = vec![false, false, true, true];
    let gamma = 0.4;
    let params = SvmParams { c: 2.0, gamma: Gamma::Value(gamma), class_weights: ClassWeights::default(), tol: 1e-8 };
    let model = smo_fit_svm(&x, &y, &params).unwrap();
    let k = kernel_matrix(&x, gamma);
    let yv = [-1.0, -1.0, 1.0, 1.0];
    let (_, oracle_obj) = svm_dual_reference(&k, &yv, &vec![2.0; 4], 300_000);
    assert!((model.dual_objective - oracle_obj).abs() < 1e-6, "{} vs {oracle_obj}", model.dual_objective);
}
