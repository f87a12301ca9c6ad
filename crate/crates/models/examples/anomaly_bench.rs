//! Tuning bench for the desk-scale anomaly experiment (not part of the suite).

use cardioscope_core::eval::auroc;
use cardioscope_core::synth::smooth_subspace_points;
use cardioscope_core::{Standardizer, FEATURE_DIMS};
use cardioscope_models::deep::{build_autoencoder, train_autoencoder, TrainConfig};
use cardioscope_models::ocsvm::{fit_ocsvm, OcGamma, OcSvmParams};
use std::time::Instant;

fn main() {
    let epochs: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(30);
    let t0 = Instant::now();
    let inlier_train = smooth_subspace_points(500, FEATURE_DIMS, 8, 0.08, (1.0, 6.0), 42, 1);
    let inlier_test = smooth_subspace_points(150, FEATURE_DIMS, 8, 0.08, (1.0, 6.0), 42, 2);

    let std = Standardizer::fit(&inlier_train);
    let train = std.transform(&inlier_train);
    let test_in = std.transform(&inlier_test);

    let mut ae = build_autoencoder(9);
    let cfg = TrainConfig { epochs, batch: 32, lr: 1e-3, seed: 5 };
    let losses = train_autoencoder(&mut ae, &train, &cfg).unwrap();
    println!("AE: loss {:.4} -> {:.4} ({:.1}x) in {:.0?}", losses[0], losses[losses.len()-1], losses[0]/losses[losses.len()-1], t0.elapsed());

    let emb_train = ae.encode(&train);
    let emb_in = ae.encode(&test_in);
    let oc = fit_ocsvm(&emb_train, &OcSvmParams { nu: 0.1, gamma: OcGamma::Scale, tol: 1e-6 }).unwrap();

    let designs: Vec<(&str, Vec<Vec<f64>>)> = vec![
        ("high-band", smooth_subspace_points(150, FEATURE_DIMS, 8, 0.08, (9.0, 18.0), 77, 3)),
        ("same-band-other-basis", smooth_subspace_points(150, FEATURE_DIMS, 8, 0.08, (1.0, 6.0), 77, 3)),
        ("high-band-amp2", smooth_subspace_points(150, FEATURE_DIMS, 8, 0.08, (9.0, 18.0), 77, 3)
            .into_iter().map(|r| r.into_iter().map(|v| v * 2.0).collect()).collect()),
        ("high-band-offset", smooth_subspace_points(150, FEATURE_DIMS, 8, 0.08, (9.0, 18.0), 77, 3)
            .into_iter().map(|r| r.into_iter().map(|v| v + 1.5).collect()).collect()),
        ("white-noise", {
            let mut rng = cardioscope_rng::SplitMix64::new(64);
            (0..150).map(|_| (0..FEATURE_DIMS).map(|_| rng.normal() * 2.0).collect()).collect()
        }),
    ];
    let mut truth = vec![false; 150];
    truth.extend(vec![true; 150]);
    for (name, raw_out) in designs {
        let test_out = std.transform(&raw_out);
        let emb_out = ae.encode(&test_out);
        let mut scores: Vec<f64> = emb_in.iter().map(|r| oc.score(r)).collect();
        scores.extend(emb_out.iter().map(|r| oc.score(r)));
        let a = auroc(&scores, &truth).unwrap();
        let rl_in = ae.reconstruction_losses(&test_in);
        let rl_out = ae.reconstruction_losses(&test_out);
        let mut s = rl_in.clone();
        s.sort_by(f64::total_cmp);
        let above = rl_out.iter().filter(|&&l| l > s[75]).count();
        println!("{name:24} emb-AUROC {a:.4}  rec-loss above median {}/150", above);
    }
    println!("total {:.0?}", t0.elapsed());
}
