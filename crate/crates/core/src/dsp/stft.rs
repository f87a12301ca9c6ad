//! Short-time Fourier transform with a Hann window, no center padding.

use crate::dsp::fft::fft_inplace;
use crate::error::DspError;

/// One analysis frame: one-sided magnitude spectrum (n_fft/2 + 1 bins).
#[derive(Debug, Clone, PartialEq)]
pub struct StftFrame {
    pub magnitudes: Vec<f64>,
    pub frame_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StftParams {
    pub n_fft: usize,
    pub hop: usize,
}

impl Default for StftParams {
    fn default() -> Self {
        StftParams { n_fft: 2048, hop: 512 }
    }
}

/// Periodic Hann window of length n.
pub fn hann_window(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 - 0.5 * (std::f64::consts::TAU * i as f64 / n as f64).cos())
        .collect()
}

/// Compute the magnitude STFT. Signals shorter than one frame are
/// zero-padded to a single frame; otherwise frame count is
/// 1 + (len - n_fft) / hop with no centering.
pub fn stft(samples: &[f64], params: StftParams) -> Result<Vec<StftFrame>, DspError> {
    if !params.n_fft.is_power_of_two() || params.n_fft < 2 {
        return Err(DspError::InvalidParams(format!("n_fft {} must be a power of two", params.n_fft)));
    }
    if params.hop == 0 {
        return Err(DspError::InvalidParams("hop must be at least 1".into()));
    }
    if samples.is_empty() {
        return Err(DspError::EmptySignal);
    }

    let n_fft = params.n_fft;
    let window = hann_window(n_fft);
    let n_frames = if samples.len() < n_fft { 1 } else { 1 + (samples.len() - n_fft) / params.hop };

    let mut frames = Vec::with_capacity(n_frames);
    let mut re = vec![0.0; n_fft];
    let mut im = vec![0.0; n_fft];
    for f in 0..n_frames {
        let start = f * params.hop;
        re.iter_mut().for_each(|v| *v = 0.0);
        im.iter_mut().for_each(|v| *v = 0.0);
        let take = n_fft.min(samples.len() - start);
        for i in 0..take {
            re[i] = samples[start + i] * window[i];
        }
        fft_inplace(&mut re, &mut im);
        let magnitudes: Vec<f64> =
            (0..=n_fft / 2).map(|k| (re[k] * re[k] + im[k] * im[k]).sqrt()).collect();
        frames.push(StftFrame { magnitudes, frame_index: f });
    }
    Ok(frames)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_count_formula() {
        let params = StftParams::default();
        let frames = stft(&vec![0.0; 10_000], params).unwrap();
        assert_eq!(frames.len(), 1 + (10_000 - 2048) / 512);
        // Short signal: single zero-padded frame.
        let frames = stft(&vec![1.0; 100], params).unwrap();
        assert_eq!(frames.len(), 1);
        assert_eq!(frames[0].magnitudes.len(), 1025);
    }

    #[test]
    fn cosine_at_bin_frequency_peaks_there() {
        let params = StftParams { n_fft: 256, hop: 64 };
        let fs = 2000.0;
        let k = 20;
        let freq = k as f64 * fs / params.n_fft as f64;
        let samples: Vec<f64> = (0..1024)
            .map(|t| (std::f64::consts::TAU * freq * t as f64 / fs).cos())
            .collect();
        let frames = stft(&samples, params).unwrap();
        for frame in &frames {
            let argmax = frame.magnitudes.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
            assert_eq!(argmax, k, "frame {}", frame.frame_index);
        }
    }

    #[test]
    fn zero_signal_all_zero_magnitudes() {
        let frames = stft(&vec![0.0; 4096], StftParams::default()).unwrap();
        for frame in frames {
            assert!(frame.magnitudes.iter().all(|&m| m == 0.0));
        }
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(stft(&[1.0], StftParams { n_fft: 1000, hop: 512 }).is_err());
        assert!(stft(&[1.0], StftParams { n_fft: 1024, hop: 0 }).is_err());
        assert!(matches!(stft(&[], StftParams::default()), Err(DspError::EmptySignal)));
    }

    /// Windowed-frame energy identity: |X_0|^2 + |X_{N/2}|^2 + 2*sum_rest
    /// equals N times the windowed time-domain energy.
    #[test]
    fn parseval_energy_identity() {
        let mut rng = cardioscope_rng::SplitMix64::new(31);
        let params = StftParams { n_fft: 512, hop: 512 };
        let samples: Vec<f64> = (0..512).map(|_| rng.normal()).collect();
        let frames = stft(&samples, params).unwrap();
        let frame = &frames[0];

        let window = hann_window(512);
        let time_energy: f64 = samples.iter().zip(&window).map(|(x, w)| (x * w) * (x * w)).sum();

        let m = &frame.magnitudes;
        let spec_energy: f64 = m[0] * m[0]
            + m[256] * m[256]
            + 2.0 * m[1..256].iter().map(|v| v * v).sum::<f64>();
        let ratio = spec_energy / (512.0 * time_energy);
        assert!((ratio - 1.0).abs() < 1e-9, "ratio {ratio}");
    }
}
