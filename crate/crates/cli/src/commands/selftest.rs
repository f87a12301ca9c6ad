//! `selftest`: fast built-in verification of the numeric core on a fresh
//! checkout, no dataset required.

use cardioscope_autodiff::gradcheck::{grad_check, GradCheckConfig};
use cardioscope_autodiff::layer::{LayerSpec, Padding};
use cardioscope_autodiff::loss::mse;
use cardioscope_autodiff::network::Network;
use cardioscope_autodiff::tensor::Tensor;
use cardioscope_core::eval::auroc;
use cardioscope_core::eval::metrics::macc;
use cardioscope_models::gan::GanArch;
use cardioscope_models::ocsvm::{fit_ocsvm, OcGamma, OcSvmParams};
use cardioscope_models::reference::{kernel_matrix, ocsvm_dual_reference, svm_dual_reference};
use cardioscope_models::svm::{smo_fit_svm, Gamma, SvmParams};
use cardioscope_models::tree::ClassWeights;
use cardioscope_rng::SplitMix64;

use crate::errors::{CliError, CliResult};

struct Suite {
    name: &'static str,
    passed: usize,
    failed: usize,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite { name, passed: 0, failed: 0 }
    }

    fn check(&mut self, ok: bool, what: &str) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            eprintln!("selftest [{}] FAILED: {}", self.name, what);
        }
    }

    fn report(&self) -> bool {
        println!("selftest [{}]: {} passed, {} failed", self.name, self.passed, self.failed);
        self.failed == 0
    }
}

fn gradient_suite() -> Suite {
    let mut suite = Suite::new("gradient-checks");
    let cases: Vec<(&str, Vec<LayerSpec>, Vec<usize>)> = vec![
        (
            "dense-sigmoid",
            vec![
                LayerSpec::Dense { in_features: 5, out_features: 4 },
                LayerSpec::Sigmoid,
                LayerSpec::Dense { in_features: 4, out_features: 1 },
            ],
            vec![3, 5],
        ),
        (
            "conv-leaky-pool",
            vec![
                LayerSpec::Conv1d { in_channels: 1, out_channels: 3, kernel: 3, stride: 1, padding: Padding::Valid },
                LayerSpec::LeakyRelu { slope: 0.2 },
                LayerSpec::MaxPool1d { kernel: 2, stride: 2 },
                LayerSpec::Flatten,
            ],
            vec![2, 1, 11],
        ),
        (
            "convt-batchnorm",
            vec![
                LayerSpec::ConvTranspose1d { in_channels: 2, out_channels: 2, kernel: 4, stride: 2, padding: 1 },
                LayerSpec::BatchNorm1d { features: 2 },
                LayerSpec::Tanh,
            ],
            vec![3, 2, 5],
        ),
    ];
    for (name, specs, shape) in cases {
        let mut net = Network::from_specs(&specs, 7).expect("valid spec");
        let mut rng = SplitMix64::new(99);
        let n: usize = shape.iter().product();
        let input = Tensor::new(shape, (0..n).map(|_| rng.normal() * 0.6 + 0.05).collect());
        let target = {
            let mut probe = net.infer(&input);
            probe.data.iter_mut().for_each(|v| *v = 0.1);
            probe
        };
        let mut loss = |out: &Tensor| mse(out, &target);
        let cfg = GradCheckConfig { fraction: 1.0, max_params: Some(80), seed: 3, ..Default::default() };
        let report = grad_check(&mut net, &input, &mut loss, &cfg);
        suite.check(report.max_rel_err < 1e-4, &format!("{name}: max rel err {}", report.max_rel_err));
    }
    suite
}

fn auroc_suite() -> Suite {
    let mut suite = Suite::new("auroc-oracle");
    for seed in 0..10u64 {
        let mut rng = SplitMix64::new(seed);
        let n = 5 + rng.below(120);
        let scores: Vec<f64> = (0..n).map(|_| (rng.uniform() * 8.0).floor() / 8.0).collect();
        let mut truth: Vec<bool> = (0..n).map(|_| rng.uniform() < 0.5).collect();
        truth[0] = true;
        truth[n - 1] = false;
        let fast = auroc(&scores, &truth).expect("both classes present");
        let mut wins = 0.0;
        let mut pairs = 0.0;
        for i in 0..n {
            for j in 0..n {
                if truth[i] && !truth[j] {
                    pairs += 1.0;
                    if scores[i] > scores[j] {
                        wins += 1.0;
                    } else if scores[i] == scores[j] {
                        wins += 0.5;
                    }
                }
            }
        }
        suite.check(fast == wins / pairs, &format!("seed {seed}: {fast} vs {}", wins / pairs));
    }
    suite
}

fn metric_identity_suite() -> Suite {
    let mut suite = Suite::new("metric-identities");
    let rows: [(f64, f64, f64); 6] = [
        (0.935, 0.834, 0.885),
        (0.970, 0.705, 0.838),
        (0.888, 0.842, 0.865),
        (0.813, 0.784, 0.799),
        (0.847, 0.827, 0.837),
        (0.880, 0.763, 0.821),
    ];
    for (spec, sens, printed) in rows {
        let m = macc(sens, spec);
        suite.check((m - printed).abs() <= 0.0005 + 1e-9, &format!("{spec}/{sens} -> {m} vs {printed}"));
    }
    suite
}

fn shape_suite() -> Suite {
    let mut suite = Suite::new("shape-chains");
    let arch = GanArch::full();
    let mut len = arch.signal_len;
    let mut d_lens = Vec::new();
    for spec in &arch.d_specs {
        if let LayerSpec::Conv1d { kernel, stride, .. } = spec {
            len = (len - kernel) / stride + 1;
            d_lens.push(len);
        }
    }
    suite.check(d_lens == vec![4980, 2487, 1240, 617, 305, 149, 71, 32], &format!("discriminator chain {d_lens:?}"));

    let mut len = 33usize;
    for spec in &arch.g_specs {
        if let LayerSpec::ConvTranspose1d { kernel, stride, padding, .. } = spec {
            len = (len - 1) * stride + kernel - 2 * padding;
        }
    }
    suite.check(len == 4987, &format!("generator output {len}"));

    let mut ae = cardioscope_models::build_autoencoder(1);
    let rows = vec![vec![0.2; cardioscope_core::FEATURE_DIMS]];
    let latent = ae.encode(&rows);
    let recon = ae.reconstruct(&rows);
    suite.check(latent[0].len() == 96, &format!("latent {}", latent[0].len()));
    suite.check(recon[0].len() == 193, &format!("reconstruction {}", recon[0].len()));
    suite
}

fn qp_suite() -> Suite {
    let mut suite = Suite::new("qp-oracles");
    for seed in 0..3u64 {
        let mut rng = SplitMix64::new(seed);
        let n = 8;
        let x: Vec<Vec<f64>> = (0..n).map(|_| (0..3).map(|_| rng.normal()).collect()).collect();
        let mut y: Vec<bool> = (0..n).map(|_| rng.uniform() < 0.5).collect();
        y[0] = true;
        y[n - 1] = false;
        let gamma = 0.5;
        let params = SvmParams { c: 1.0, gamma: Gamma::Value(gamma), class_weights: ClassWeights::default(), tol: 1e-8 };
        let model = smo_fit_svm(&x, &y, &params).expect("solvable");
        let k = kernel_matrix(&x, gamma);
        let yv: Vec<f64> = y.iter().map(|&b| if b { 1.0 } else { -1.0 }).collect();
        let (_, oracle) = svm_dual_reference(&k, &yv, &vec![1.0; n], 150_000);
        suite.check(
            (model.dual_objective - oracle).abs() < 1e-6,
            &format!("svm seed {seed}: {} vs {oracle}", model.dual_objective),
        );

        let ocp = OcSvmParams { nu: 0.5, gamma: OcGamma::Value(gamma), tol: 1e-10 };
        let oc = fit_ocsvm(&x, &ocp).expect("solvable");
        let (_, oracle) = ocsvm_dual_reference(&k, 1.0 / (0.5 * n as f64), 150_000);
        suite.check(
            (oc.dual_objective - oracle).abs() < 1e-6,
            &format!("ocsvm seed {seed}: {} vs {oracle}", oc.dual_objective),
        );
    }
    suite
}

pub fn selftest() -> CliResult {
    let suites = [gradient_suite(), auroc_suite(), metric_identity_suite(), shape_suite(), qp_suite()];
    let mut all_ok = true;
    for suite in &suites {
        all_ok &= suite.report();
    }
    if all_ok {
        println!("selftest: all suites passed");
        Ok(())
    } else {
        Err(CliError { kind: "selftest", message: "one or more suites failed".into() })
    }
}
