//! Spectral contrast: per-band log spread between peaks and valleys.

use crate::dsp::stft::StftFrame;
use crate::mat::Mat;

const EPS: f64 = 1e-10;
/// Fraction of each band's bins averaged for the peak / valley estimates.
const QUANTILE: f64 = 0.02;
/// Lowest band edge. The octave ladder is anchored at 20 Hz so that all
/// seven bands fit under a 1 kHz Nyquist.
const BAND_ANCHOR_HZ: f64 = 20.0;
pub const N_BANDS: usize = 7;

/// Band edges: [0, 20) then six octaves [20*2^b, 20*2^(b+1)), the last edge
/// capped at Nyquist (inclusive, so the Nyquist bin belongs to the top band).
fn band_edges(nyquist: f64) -> Vec<(f64, f64)> {
    let mut edges = vec![(0.0, BAND_ANCHOR_HZ)];
    for b in 0..6 {
        let lo = BAND_ANCHOR_HZ * 2f64.powi(b);
        let hi = (BAND_ANCHOR_HZ * 2f64.powi(b + 1)).min(nyquist);
        edges.push((lo, hi));
    }
    edges
}

/// Contrast matrix (7 x frames): log(peak + eps) - log(valley + eps) per
/// band, where peak/valley are the means of the top/bottom 2% (at least one
/// bin) of sorted magnitudes in the band.
pub fn spectral_contrast(frames: &[StftFrame], n_fft: usize, sample_rate: u32) -> Mat {
    let nyquist = sample_rate as f64 / 2.0;
    let edges = band_edges(nyquist);

    // Assign each FFT bin to its band once.
    let n_bins = n_fft / 2 + 1;
    let mut band_bins: Vec<Vec<usize>> = vec![Vec::new(); N_BANDS];
    for k in 0..n_bins {
        let f = k as f64 * sample_rate as f64 / n_fft as f64;
        for (b, &(lo, hi)) in edges.iter().enumerate() {
            let in_band = if b == N_BANDS - 1 { f >= lo && f <= hi } else { f >= lo && f < hi };
            if in_band {
                band_bins[b].push(k);
                break;
            }
        }
    }

    let mut out = Mat::zeros(N_BANDS, frames.len());
    for (t, frame) in frames.iter().enumerate() {
        for (b, bins) in band_bins.iter().enumerate() {
            if bins.is_empty() {
                continue;
            }
            let mut mags: Vec<f64> = bins.iter().map(|&k| frame.magnitudes[k]).collect();
            mags.sort_by(f64::total_cmp);
            let n_sel = ((QUANTILE * mags.len() as f64) as usize).max(1);
            let valley: f64 = mags[..n_sel].iter().sum::<f64>() / n_sel as f64;
            let peak: f64 = mags[mags.len() - n_sel..].iter().sum::<f64>() / n_sel as f64;
            out.set(b, t, (peak + EPS).ln() - (valley + EPS).ln());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame_with(mags: Vec<f64>) -> Vec<StftFrame> {
        vec![StftFrame { magnitudes: mags, frame_index: 0 }]
    }

    #[test]
    fn flat_spectrum_has_zero_contrast() {
        let frames = frame_with(vec![0.5; 1025]);
        let out = spectral_contrast(&frames, 2048, 2000);
        assert!(out.data.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn zero_signal_zero_contrast() {
        let frames = frame_with(vec![0.0; 1025]);
        let out = spectral_contrast(&frames, 2048, 2000);
        assert!(out.data.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn dominant_bin_raises_its_band() {
        // Put one huge bin in band 3 ([160, 320) Hz) over a small baseline.
        let n_fft = 2048;
        let fs = 2000u32;
        let mut mags = vec![0.01; n_fft / 2 + 1];
        let target_freq = 200.0;
        let k = (target_freq * n_fft as f64 / fs as f64).round() as usize;
        mags[k] = 10.0;
        let out = spectral_contrast(&frame_with(mags), n_fft, fs);
        let band3 = out.get(4, 0); // bands: [0,20) [20,40) [40,80) [80,160) [160,320) ...
        for b in 0..N_BANDS {
            if b != 4 {
                assert!(band3 > out.get(b, 0), "band {b}: {} !< {band3}", out.get(b, 0));
            }
        }
    }

    #[test]
    fn seven_bands_cover_all_bins_once() {
        let n_fft = 2048;
        let fs = 2000u32;
        let frames = frame_with(vec![1.0; n_fft / 2 + 1]);
        let out = spectral_contrast(&frames, n_fft, fs);
        assert_eq!(out.rows, 7);
        // Definition check by direct evaluation on a constructed frame:
        // one dominant bin at 700 Hz (band 6: [640, 1000]).
        let mut mags = vec![0.2; n_fft / 2 + 1];
        let k = (700.0 * n_fft as f64 / fs as f64) as usize;
        mags[k] = 5.0;
        let out = spectral_contrast(&frame_with(mags), n_fft, fs);
        let band = out.get(6, 0);
        // top 2% of band 6 (369 bins -> 7 bins averaged): mean of one 5.0
        // and six 0.2 vs valley 0.2.
        let peak = (5.0 + 6.0 * 0.2) / 7.0;
        let expect = (peak + EPS).ln() - (0.2 + EPS).ln();
        assert!((band - expect).abs() < 1e-9, "{band} vs {expect}");
    }
}
