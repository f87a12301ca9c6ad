//! Chroma: folding of spectral energy onto the 12 pitch classes.

use crate::dsp::stft::StftFrame;
use crate::mat::Mat;

/// Reference tuning: pitch class 0 sits at A = 440 Hz.
pub const TUNING_HZ: f64 = 440.0;
/// Bins below this frequency carry no pitch information for our purposes.
pub const MIN_FREQ_HZ: f64 = 20.0;

/// Map a frequency to its pitch class (octave-equivalent).
pub fn pitch_class(freq: f64) -> usize {
    let semitones = 12.0 * (freq / TUNING_HZ).log2();
    (semitones.round() as i64).rem_euclid(12) as usize
}

/// Chroma matrix (12 x frames). Bin energies (magnitude squared) accumulate
/// per pitch class; every frame column is max-normalized to [0, 1], with
/// all-zero frames left at zero.
pub fn chroma(frames: &[StftFrame], n_fft: usize, sample_rate: u32) -> Mat {
    let mut out = Mat::zeros(12, frames.len());
    for (t, frame) in frames.iter().enumerate() {
        for (k, &mag) in frame.magnitudes.iter().enumerate() {
            let freq = k as f64 * sample_rate as f64 / n_fft as f64;
            if freq < MIN_FREQ_HZ {
                continue;
            }
            let class = pitch_class(freq);
            *out.row_mut(class).get_mut(t).unwrap() += mag * mag;
        }
        let max = (0..12).map(|c| out.get(c, t)).fold(0.0f64, f64::max);
        if max > 0.0 {
            for c in 0..12 {
                let v = out.get(c, t) / max;
                out.set(c, t, v);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsp::stft::{stft, StftParams};

    fn tone(freq: f64, fs: f64, n: usize) -> Vec<f64> {
        (0..n).map(|t| (std::f64::consts::TAU * freq * t as f64 / fs).sin()).collect()
    }

    #[test]
    fn a440_maps_to_class_zero() {
        let params = StftParams { n_fft: 2048, hop: 512 };
        let frames = stft(&tone(440.0, 2000.0, 6000), params).unwrap();
        let ch = chroma(&frames, 2048, 2000);
        for t in 0..ch.cols {
            let argmax = (0..12).max_by(|&a, &b| ch.get(a, t).total_cmp(&ch.get(b, t))).unwrap();
            assert_eq!(argmax, 0, "frame {t}");
        }
    }

    #[test]
    fn octave_equivalence_220() {
        let params = StftParams { n_fft: 2048, hop: 512 };
        let frames = stft(&tone(220.0, 2000.0, 6000), params).unwrap();
        let ch = chroma(&frames, 2048, 2000);
        let argmax = (0..12).max_by(|&a, &b| ch.get(a, 0).total_cmp(&ch.get(b, 0))).unwrap();
        assert_eq!(argmax, 0);
        assert_eq!(pitch_class(220.0), pitch_class(440.0));
        assert_eq!(pitch_class(880.0), 0);
    }

    #[test]
    fn zero_signal_zero_chroma() {
        let params = StftParams::default();
        let frames = stft(&vec![0.0; 4096], params).unwrap();
        let ch = chroma(&frames, 2048, 2000);
        assert!(ch.data.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn columns_bounded_by_unit_interval() {
        let mut rng = cardioscope_rng::SplitMix64::new(77);
        let samples: Vec<f64> = (0..8192).map(|_| rng.normal() * 0.3).collect();
        let frames = stft(&samples, StftParams::default()).unwrap();
        let ch = chroma(&frames, 2048, 2000);
        assert!(ch.data.iter().all(|&v| (0.0..=1.0).contains(&v)));
        // Every nonzero column attains the maximum 1.
        for t in 0..ch.cols {
            let max = (0..12).map(|c| ch.get(c, t)).fold(0.0f64, f64::max);
            assert!(max == 0.0 || (max - 1.0).abs() < 1e-12);
        }
    }
}
