//! Synthetic data generators for desk-scale experiments and self-tests:
//! two-class 1D signals distinguished by dominant frequency, and feature
//! clouds living on low-dimensional subspaces.

use cardioscope_rng::SplitMix64;

/// Parameters for two-class sinusoid generation. Class labels follow the
/// convention of the real task: false = Normal, true = Abnormal.
#[derive(Debug, Clone, Copy)]
pub struct SignalTaskConfig {
    /// Samples per signal.
    pub len: usize,
    /// Dominant frequency (cycles per window) of the Normal class.
    pub freq_normal: f64,
    /// Dominant frequency of the Abnormal class.
    pub freq_abnormal: f64,
    /// Std of per-signal frequency jitter (cycles).
    pub freq_jitter: f64,
    /// Std of additive white noise.
    pub noise: f64,
    /// Per-signal amplitude range.
    pub amp_range: (f64, f64),
}

impl Default for SignalTaskConfig {
    fn default() -> Self {
        SignalTaskConfig {
            len: 171,
            freq_normal: 10.0,
            freq_abnormal: 13.0,
            freq_jitter: 1.0,
            noise: 0.55,
            amp_range: (0.3, 1.0),
        }
    }
}

/// One random sinusoid of the given class, clipped to [-1, 1]. Phase is
/// uniform so raw-sample memorization carries no class information.
pub fn synthetic_signal(abnormal: bool, cfg: &SignalTaskConfig, rng: &mut SplitMix64) -> Vec<f64> {
    let base = if abnormal { cfg.freq_abnormal } else { cfg.freq_normal };
    let freq = base + cfg.freq_jitter * rng.normal();
    let amp = rng.uniform_in(cfg.amp_range.0, cfg.amp_range.1);
    let phase = rng.uniform_in(0.0, std::f64::consts::TAU);
    (0..cfg.len)
        .map(|t| {
            let x = amp * (std::f64::consts::TAU * freq * t as f64 / cfg.len as f64 + phase).sin()
                + cfg.noise * rng.normal();
            x.clamp(-1.0, 1.0)
        })
        .collect()
}

/// A labelled set of `n` signals with the given abnormal share.
pub fn synthetic_signal_set(
    n: usize,
    abnormal_share: f64,
    cfg: &SignalTaskConfig,
    seed: u64,
) -> (Vec<Vec<f64>>, Vec<bool>) {
    let mut rng = SplitMix64::new(seed);
    let n_abnormal = (n as f64 * abnormal_share).round() as usize;
    let mut signals = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let abnormal = i < n_abnormal;
        signals.push(synthetic_signal(abnormal, cfg, &mut rng));
        labels.push(abnormal);
    }
    // Interleave classes deterministically.
    let mut order: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut order);
    let signals = order.iter().map(|&i| signals[i].clone()).collect();
    let labels = order.iter().map(|&i| labels[i]).collect();
    (signals, labels)
}

/// Points x = W h + noise on a random `rank`-dimensional subspace of R^dims.
/// The subspace is fixed by `subspace_seed`; samples vary with `sample_seed`.
pub fn subspace_points(
    n: usize,
    dims: usize,
    rank: usize,
    noise: f64,
    subspace_seed: u64,
    sample_seed: u64,
) -> Vec<Vec<f64>> {
    let mut w_rng = SplitMix64::new(subspace_seed);
    let basis: Vec<Vec<f64>> = (0..rank).map(|_| (0..dims).map(|_| w_rng.normal()).collect()).collect();
    sample_on_basis(n, dims, &basis, noise, sample_seed)
}

/// Points on a subspace spanned by band-limited sinusoid basis vectors:
/// basis r is sin(2*pi*f_r*d/dims + phi_r) with f_r uniform in `band`.
/// Smooth structure along the feature axis makes the manifold learnable by
/// convolutional models, and disjoint bands give disjoint manifolds.
pub fn smooth_subspace_points(
    n: usize,
    dims: usize,
    rank: usize,
    noise: f64,
    band: (f64, f64),
    subspace_seed: u64,
    sample_seed: u64,
) -> Vec<Vec<f64>> {
    let mut w_rng = SplitMix64::new(subspace_seed);
    let basis: Vec<Vec<f64>> = (0..rank)
        .map(|_| {
            let freq = w_rng.uniform_in(band.0, band.1);
            let phase = w_rng.uniform_in(0.0, std::f64::consts::TAU);
            (0..dims)
                .map(|d| (std::f64::consts::TAU * freq * d as f64 / dims as f64 + phase).sin())
                .collect()
        })
        .collect();
    sample_on_basis(n, dims, &basis, noise, sample_seed)
}

fn sample_on_basis(n: usize, dims: usize, basis: &[Vec<f64>], noise: f64, sample_seed: u64) -> Vec<Vec<f64>> {
    let mut rng = SplitMix64::new(sample_seed);
    (0..n)
        .map(|_| {
            let h: Vec<f64> = (0..basis.len()).map(|_| rng.normal()).collect();
            (0..dims)
                .map(|d| {
                    let v: f64 = basis.iter().zip(&h).map(|(b, &hi)| b[d] * hi).sum();
                    v + noise * rng.normal()
                })
                .collect()
        })
        .collect()
}
