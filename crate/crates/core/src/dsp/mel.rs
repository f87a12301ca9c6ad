//! Mel filterbank and mel-power spectrogram.

use crate::dsp::stft::StftFrame;
use crate::error::DspError;
use crate::mat::Mat;

/// Hz -> mel (HTK convention).
pub fn hz_to_mel(f: f64) -> f64 {
    2595.0 * (1.0 + f / 700.0).log10()
}

/// mel -> Hz.
pub fn mel_to_hz(m: f64) -> f64 {
    700.0 * (10f64.powf(m / 2595.0) - 1.0)
}

/// Triangular mel filterbank: weights matrix of n_mels x (n_fft/2 + 1).
#[derive(Debug, Clone)]
pub struct MelFilterbank {
    pub weights: Mat,
    pub n_mels: usize,
    pub sample_rate: u32,
}

/// Build a filterbank with peaks equally spaced on the mel scale between
/// fmin and fmax, sampled at the FFT bin center frequencies.
pub fn mel_filterbank(
    n_mels: usize,
    n_fft: usize,
    sample_rate: u32,
    fmin: f64,
    fmax: f64,
) -> Result<MelFilterbank, DspError> {
    let nyquist = sample_rate as f64 / 2.0;
    if n_mels == 0 || !n_fft.is_power_of_two() {
        return Err(DspError::InvalidParams("n_mels must be positive and n_fft a power of two".into()));
    }
    if !(0.0 <= fmin && fmin < fmax && fmax <= nyquist) {
        return Err(DspError::InvalidParams(format!(
            "need 0 <= fmin < fmax <= fs/2, got {fmin}..{fmax} at fs {sample_rate}"
        )));
    }

    let n_bins = n_fft / 2 + 1;
    let mel_lo = hz_to_mel(fmin);
    let mel_hi = hz_to_mel(fmax);
    let edges: Vec<f64> = (0..n_mels + 2)
        .map(|i| mel_to_hz(mel_lo + (mel_hi - mel_lo) * i as f64 / (n_mels + 1) as f64))
        .collect();

    let mut weights = Mat::zeros(n_mels, n_bins);
    for m in 0..n_mels {
        let (lo, center, hi) = (edges[m], edges[m + 1], edges[m + 2]);
        for k in 0..n_bins {
            let f = k as f64 * sample_rate as f64 / n_fft as f64;
            let w = if f <= lo || f >= hi {
                0.0
            } else if f <= center {
                (f - lo) / (center - lo)
            } else {
                (hi - f) / (hi - center)
            };
            weights.set(m, k, w.max(0.0));
        }
    }
    Ok(MelFilterbank { weights, n_mels, sample_rate })
}

/// Apply the filterbank to the power spectrogram (magnitudes squared):
/// output is n_mels x frames.
pub fn mel_spectrogram(frames: &[StftFrame], bank: &MelFilterbank) -> Mat {
    let n_frames = frames.len();
    let mut out = Mat::zeros(bank.n_mels, n_frames);
    for (t, frame) in frames.iter().enumerate() {
        assert_eq!(frame.magnitudes.len(), bank.weights.cols, "bin count mismatch");
        for m in 0..bank.n_mels {
            let row = bank.weights.row(m);
            let acc: f64 = row
                .iter()
                .zip(&frame.magnitudes)
                .map(|(w, mag)| w * mag * mag)
                .sum();
            out.set(m, t, acc);
        }
    }
    out
}
