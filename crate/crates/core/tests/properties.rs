//! Property tests for the I/O and metric invariants.

use cardioscope_core::dsp::stft::{stft, StftParams};
use cardioscope_core::eval::auroc;
use cardioscope_core::signal::wav::{parse_wav, write_wav16};
use cardioscope_core::signal::{pad_to, prune_to};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// parse(write(rate, samples)) recovers rate and samples exactly.
    #[test]
    fn wav_roundtrip(rate in 1u32..=48_000, samples in prop::collection::vec(any::<i16>(), 1..400)) {
        let bytes = write_wav16(rate, &samples);
        let wav = parse_wav(&bytes).unwrap();
        prop_assert_eq!(wav.sample_rate, rate);
        prop_assert_eq!(wav.samples.len(), samples.len());
        for (got, want) in wav.samples.iter().zip(&samples) {
            prop_assert_eq!(*got, *want as f64 / 32768.0);
        }
    }

    /// pad_to then prune_to(original length) is the identity.
    #[test]
    fn pad_then_prune_identity(samples in prop::collection::vec(-1.0f64..1.0, 1..200), extra in 0usize..300) {
        let target = samples.len() + extra;
        let padded = pad_to(&samples, target).unwrap();
        prop_assert_eq!(padded.len(), target);
        let back = prune_to(&padded, samples.len()).unwrap();
        prop_assert_eq!(back, samples);
    }

    /// AUROC is invariant under strictly monotone transforms of scores.
    #[test]
    fn auroc_monotone_invariance(
        scores in prop::collection::vec(-50.0f64..50.0, 4..120),
        flips in prop::collection::vec(any::<bool>(), 4..120),
        scale in 0.01f64..10.0,
        shift in -5.0f64..5.0,
    ) {
        let n = scores.len().min(flips.len());
        let scores = &scores[..n];
        let mut truth = flips[..n].to_vec();
        truth[0] = true;
        truth[n - 1] = false;
        let base = auroc(scores, &truth).unwrap();
        let affine: Vec<f64> = scores.iter().map(|&s| scale * s + shift).collect();
        let tanh: Vec<f64> = scores.iter().map(|&s| (s / 50.0).tanh()).collect();
        prop_assert!((auroc(&affine, &truth).unwrap() - base).abs() < 1e-12);
        prop_assert!((auroc(&tanh, &truth).unwrap() - base).abs() < 1e-12);
    }

    /// STFT magnitudes match the naive O(n^2) DFT oracle.
    #[test]
    fn stft_matches_naive_dft_oracle(seed in 0u64..20) {
        let mut rng = cardioscope_rng::SplitMix64::new(seed);
        let n = 4096;
        let samples: Vec<f64> = (0..n).map(|_| rng.normal() * 0.5).collect();
        let params = StftParams { n_fft: 512, hop: 512 };
        let frames = stft(&samples, params).unwrap();

        let window: Vec<f64> = (0..512)
            .map(|i| 0.5 - 0.5 * (std::f64::consts::TAU * i as f64 / 512.0).cos())
            .collect();
        for frame in frames.iter().take(2) {
            let start = frame.frame_index * params.hop;
            let windowed: Vec<f64> =
                (0..512).map(|i| samples[start + i] * window[i]).collect();
            for k in (0..=256).step_by(17) {
                let (mut re, mut im) = (0.0, 0.0);
                for (t, &x) in windowed.iter().enumerate() {
                    let ang = -std::f64::consts::TAU * (k * t) as f64 / 512.0;
                    re += x * ang.cos();
                    im += x * ang.sin();
                }
                let oracle = (re * re + im * im).sqrt();
                let got = frame.magnitudes[k];
                let denom = oracle.abs().max(1.0);
                prop_assert!((got - oracle).abs() / denom < 1e-9, "bin {}: {} vs {}", k, got, oracle);
            }
        }
    }
}
