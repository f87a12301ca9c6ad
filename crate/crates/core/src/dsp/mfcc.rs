//! Mel-frequency cepstral coefficients.

use crate::mat::Mat;

pub const LOG_FLOOR: f64 = 1e-10;

/// Orthonormal DCT-II along the mel axis of the log mel-power matrix,
/// keeping the first `n_mfcc` coefficients.
pub fn mfcc_from_mel(mel_power: &Mat, n_mfcc: usize) -> Mat {
    let n_mels = mel_power.rows;
    let n_frames = mel_power.cols;
    assert!(n_mfcc <= n_mels, "asked for {n_mfcc} coefficients from {n_mels} bands");

    let mut log_mel = Mat::zeros(n_mels, n_frames);
    for i in 0..log_mel.data.len() {
        log_mel.data[i] = (mel_power.data[i] + LOG_FLOOR).ln();
    }

    // Precompute the DCT basis: basis[k][n] = s_k * cos(pi*k*(2n+1)/(2N)).
    let norm0 = (1.0 / n_mels as f64).sqrt();
    let norm = (2.0 / n_mels as f64).sqrt();
    let mut out = Mat::zeros(n_mfcc, n_frames);
    for k in 0..n_mfcc {
        let s = if k == 0 { norm0 } else { norm };
        for t in 0..n_frames {
            let mut acc = 0.0;
            for n in 0..n_mels {
                let ang = std::f64::consts::PI * k as f64 * (2 * n + 1) as f64 / (2 * n_mels) as f64;
                acc += log_mel.get(n, t) * ang.cos();
            }
            out.set(k, t, s * acc);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_column_concentrates_in_coefficient_zero() {
        let n_mels = 128;
        let c = 0.37f64;
        // mel power chosen so that ln(power + floor) == c exactly.
        let power = c.exp() - LOG_FLOOR;
        let mut mel = Mat::zeros(n_mels, 1);
        mel.data.iter_mut().for_each(|v| *v = power);
        let out = mfcc_from_mel(&mel, 40);
        assert!((out.get(0, 0) - c * (n_mels as f64).sqrt()).abs() < 1e-9);
        for k in 1..40 {
            assert!(out.get(k, 0).abs() < 1e-9, "coefficient {k} = {}", out.get(k, 0));
        }
    }

    #[test]
    fn zero_power_gives_floor_constant_column() {
        let mel = Mat::zeros(64, 3);
        let out = mfcc_from_mel(&mel, 20);
        let expected0 = LOG_FLOOR.ln() * (64f64).sqrt();
        for t in 0..3 {
            assert!((out.get(0, t) - expected0).abs() < 1e-9);
            for k in 1..20 {
                assert!(out.get(k, t).abs() < 1e-9);
            }
        }
    }

    /// Naive cosine-sum oracle on a random column.
    #[test]
    fn matches_naive_dct_oracle() {
        let mut rng = cardioscope_rng::SplitMix64::new(17);
        let n_mels = 32;
        let mut mel = Mat::zeros(n_mels, 1);
        mel.data.iter_mut().for_each(|v| *v = rng.uniform() + 0.1);
        let out = mfcc_from_mel(&mel, n_mels);
        let logv: Vec<f64> = mel.data.iter().map(|&p| (p + LOG_FLOOR).ln()).collect();
        for k in 0..n_mels {
            let s = if k == 0 { (1.0 / n_mels as f64).sqrt() } else { (2.0 / n_mels as f64).sqrt() };
            let mut expect = 0.0;
            for (n, &l) in logv.iter().enumerate() {
                expect += l * (std::f64::consts::PI * k as f64 * (2 * n + 1) as f64 / (2 * n_mels) as f64).cos();
            }
            expect *= s;
            assert!((out.get(k, 0) - expect).abs() < 1e-10, "k={k}");
        }
    }

    /// Orthonormal DCT preserves column energy when all coefficients kept.
    #[test]
    fn orthonormality_preserves_energy() {
        let mut rng = cardioscope_rng::SplitMix64::new(8);
        let n_mels = 16;
        let mut mel = Mat::zeros(n_mels, 1);
        mel.data.iter_mut().for_each(|v| *v = rng.uniform() + 0.5);
        let out = mfcc_from_mel(&mel, n_mels);
        let in_energy: f64 = mel.data.iter().map(|&p| (p + LOG_FLOOR).ln().powi(2)).sum();
        let out_energy: f64 = out.data.iter().map(|&v| v * v).sum();
        assert!((in_energy - out_energy).abs() < 1e-9);
    }
}
