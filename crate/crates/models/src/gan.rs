//! Semi-supervised GAN: a K=2-class convolutional discriminator whose fake
//! class is implicit (logsumexp reformulation), and a transposed-conv
//! generator trained by feature matching against the discriminator's pooled
//! feature layer.

use cardioscope_autodiff::layer::{LayerSpec, Mode, Padding, Pass};
use cardioscope_autodiff::loss::{logsumexp, softmax_cross_entropy, softplus};
use cardioscope_autodiff::network::Network;
use cardioscope_autodiff::optim::Adam;
use cardioscope_autodiff::tensor::Tensor;
use cardioscope_core::signal::{decimate, pad_to, prune_to, AudioRecord};
use cardioscope_rng::SplitMix64;

use crate::deep::rows_to_signal_tensor;
use crate::error::ModelError;

/// Generator output length fixed by the transpose-stack arithmetic.
pub const FULL_SIGNAL_LEN: usize = 4987;
/// Raw window taken from each recording: 5 seconds at 2000 Hz.
pub const RAW_WINDOW: usize = 10_000;
/// Decimation factor applied to the raw window.
pub const DECIMATION: usize = 2;
pub const FULL_Z_DIM: usize = 100;
/// Discriminator feature width at the pooled flatten layer.
pub const FULL_FEATURE_DIMS: usize = 256;

/// Discriminator + generator architecture pair. The generator's output
/// length always equals the discriminator's input length.
#[derive(Debug, Clone)]
pub struct GanArch {
    pub d_specs: Vec<LayerSpec>,
    pub g_specs: Vec<LayerSpec>,
    pub signal_len: usize,
    pub z_dim: usize,
    /// Index of the discriminator layer whose output is the feature vector
    /// M(x) (the post-pool flatten).
    pub feature_layer: usize,
}

fn flatten_index(specs: &[LayerSpec]) -> usize {
    specs.iter().position(|s| matches!(s, LayerSpec::Flatten)).expect("discriminator has a flatten")
}

impl GanArch {
    /// Full-scale pair for 4,987-sample windows: eight stride-halving conv
    /// layers (64..256 filters, kernel 8, leaky ReLU 0.2) pooled to a
    /// 256-wide feature vector and 2 class logits; generator mirrors it from
    /// a 100-d noise vector through eight transposed convolutions.
    pub fn full() -> GanArch {
        let conv = |c_in, c_out, stride| LayerSpec::Conv1d {
            in_channels: c_in,
            out_channels: c_out,
            kernel: 8,
            stride,
            padding: Padding::Valid,
        };
        let lrelu = LayerSpec::LeakyRelu { slope: 0.2 };
        let mut d_specs = Vec::new();
        let filters = [(1, 64, 1), (64, 64, 2), (64, 128, 2), (128, 256, 2), (256, 256, 2), (256, 256, 2), (256, 256, 2), (256, 256, 2)];
        for (c_in, c_out, stride) in filters {
            d_specs.push(conv(c_in, c_out, stride));
            d_specs.push(lrelu.clone());
        }
        d_specs.push(LayerSpec::AdaptiveAvgPool1d { output: 1 });
        d_specs.push(LayerSpec::Flatten);
        d_specs.push(LayerSpec::Dense { in_features: FULL_FEATURE_DIMS, out_features: 2 });

        let convt = |c_in, c_out, stride, padding| LayerSpec::ConvTranspose1d {
            in_channels: c_in,
            out_channels: c_out,
            kernel: 8,
            stride,
            padding,
        };
        let mut g_specs = vec![
            LayerSpec::Dense { in_features: FULL_Z_DIM, out_features: 256 * 33 },
            LayerSpec::BatchNorm1d { features: 256 * 33 },
            LayerSpec::Relu,
            LayerSpec::Reshape { channels: 256, length: 33 },
        ];
        for _ in 0..5 {
            g_specs.push(convt(256, 256, 2, 0));
            g_specs.push(LayerSpec::BatchNorm1d { features: 256 });
            g_specs.push(LayerSpec::Relu);
        }
        g_specs.push(convt(256, 128, 2, 1));
        g_specs.push(LayerSpec::BatchNorm1d { features: 128 });
        g_specs.push(LayerSpec::Relu);
        g_specs.push(convt(128, 64, 2, 1));
        g_specs.push(LayerSpec::BatchNorm1d { features: 64 });
        g_specs.push(LayerSpec::Relu);
        g_specs.push(convt(64, 1, 1, 0));
        g_specs.push(LayerSpec::Tanh);

        let feature_layer = flatten_index(&d_specs);
        GanArch { d_specs, g_specs, signal_len: FULL_SIGNAL_LEN, z_dim: FULL_Z_DIM, feature_layer }
    }

    /// Scaled-down pair of the same shape family for 171-sample signals;
    /// used by desk-scale experiments and self-tests.
    pub fn compact() -> GanArch {
        let conv = |c_in, c_out, stride| LayerSpec::Conv1d {
            in_channels: c_in,
            out_channels: c_out,
            kernel: 8,
            stride,
            padding: Padding::Valid,
        };
        let lrelu = LayerSpec::LeakyRelu { slope: 0.2 };
        let d_specs = vec![
            conv(1, 16, 1),
            lrelu.clone(),
            conv(16, 16, 2),
            lrelu.clone(),
            conv(16, 32, 2),
            lrelu.clone(),
            conv(32, 32, 2),
            lrelu,
            LayerSpec::AdaptiveAvgPool1d { output: 1 },
            LayerSpec::Flatten,
            LayerSpec::Dense { in_features: 32, out_features: 2 },
        ];
        let convt = |c_in, c_out, stride, padding| LayerSpec::ConvTranspose1d {
            in_channels: c_in,
            out_channels: c_out,
            kernel: 8,
            stride,
            padding,
        };
        let g_specs = vec![
            LayerSpec::Dense { in_features: 32, out_features: 32 * 17 },
            LayerSpec::BatchNorm1d { features: 32 * 17 },
            LayerSpec::Relu,
            LayerSpec::Reshape { channels: 32, length: 17 },
            convt(32, 32, 2, 1),
            LayerSpec::BatchNorm1d { features: 32 },
            LayerSpec::Relu,
            convt(32, 16, 2, 1),
            LayerSpec::BatchNorm1d { features: 16 },
            LayerSpec::Relu,
            convt(16, 16, 2, 1),
            LayerSpec::BatchNorm1d { features: 16 },
            LayerSpec::Relu,
            convt(16, 1, 1, 0),
            LayerSpec::Tanh,
        ];
        let feature_layer = flatten_index(&d_specs);
        GanArch { d_specs, g_specs, signal_len: 171, z_dim: 32, feature_layer }
    }
}

/// Crop one recording into the GAN input window: first 5 seconds (zero-
/// padded if shorter), block-mean decimated by 2, cropped to the generator
/// output length. Amplitudes are already in [-1, 1] from WAV scaling.
pub fn prepare_gan_input(record: &AudioRecord) -> Result<Vec<f64>, ModelError> {
    if record.samples.is_empty() {
        return Err(ModelError::DegenerateData("empty signal".into()));
    }
    let padded = if record.samples.len() < RAW_WINDOW {
        pad_to(&record.samples, RAW_WINDOW).expect("shorter than target")
    } else {
        record.samples.clone()
    };
    let window = prune_to(&padded, RAW_WINDOW).expect("padded to at least the window");
    let decimated = decimate(&window, DECIMATION);
    Ok(decimated[..FULL_SIGNAL_LEN].to_vec())
}

/// P(real | x) under the implicit-fake-class reformulation:
/// Z = sum_k exp(l_k), P(real) = Z / (1 + Z) = sigmoid(logsumexp(l)).
pub fn discriminator_real_prob(logits: &[f64]) -> f64 {
    let lse = logsumexp(logits);
    1.0 / (1.0 + (-lse).exp())
}

/// Per-batch loss decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GanLosses {
    /// Cross-entropy over the K real classes on labelled data.
    pub supervised: f64,
    /// -mean log P(real) on unlabelled real data.
    pub unsup_real: f64,
    /// -mean log P(fake) on generated data.
    pub unsup_fake: f64,
    /// Squared distance of batch-mean discriminator features.
    pub generator_fm: f64,
    pub total_d: f64,
}

impl GanLosses {
    pub fn is_finite(&self) -> bool {
        self.supervised.is_finite()
            && self.unsup_real.is_finite()
            && self.unsup_fake.is_finite()
            && self.generator_fm.is_finite()
    }
}

/// -mean log P(real) over a logits batch; gradient w.r.t. logits.
pub fn unsup_real_loss(logits: &Tensor) -> (f64, Tensor) {
    let (batch, k) = (logits.shape[0], logits.shape[1]);
    let mut grad = Tensor::zeros(logits.shape.clone());
    let mut loss = 0.0;
    for b in 0..batch {
        let row = &logits.data[b * k..][..k];
        let lse = logsumexp(row);
        loss += softplus(-lse);
        let p_fake = 1.0 / (1.0 + lse.exp());
        for j in 0..k {
            let softmax_j = (row[j] - lse).exp();
            grad.data[b * k + j] = -p_fake * softmax_j / batch as f64;
        }
    }
    (loss / batch as f64, grad)
}

/// -mean log P(fake) over a logits batch; gradient w.r.t. logits.
pub fn unsup_fake_loss(logits: &Tensor) -> (f64, Tensor) {
    let (batch, k) = (logits.shape[0], logits.shape[1]);
    let mut grad = Tensor::zeros(logits.shape.clone());
    let mut loss = 0.0;
    for b in 0..batch {
        let row = &logits.data[b * k..][..k];
        let lse = logsumexp(row);
        loss += softplus(lse);
        let p_real = 1.0 / (1.0 + (-lse).exp());
        for j in 0..k {
            let softmax_j = (row[j] - lse).exp();
            grad.data[b * k + j] = p_real * softmax_j / batch as f64;
        }
    }
    (loss / batch as f64, grad)
}

/// || mean(M_real) - mean(M_fake) ||^2 with the gradient w.r.t. M_fake.
pub fn generator_feature_matching_loss(m_real: &Tensor, m_fake: &Tensor) -> (f64, Tensor) {
    assert_eq!(m_real.shape[1], m_fake.shape[1], "feature width mismatch");
    let dims = m_real.shape[1];
    let (b_real, b_fake) = (m_real.shape[0], m_fake.shape[0]);
    assert!(b_real > 0 && b_fake > 0, "empty feature batch");

    let mean = |t: &Tensor, b: usize| -> Vec<f64> {
        let mut m = vec![0.0; dims];
        for row in 0..b {
            for (mj, &v) in m.iter_mut().zip(&t.data[row * dims..][..dims]) {
                *mj += v;
            }
        }
        m.iter_mut().for_each(|v| *v /= b as f64);
        m
    };
    let mu_real = mean(m_real, b_real);
    let mu_fake = mean(m_fake, b_fake);

    let mut loss = 0.0;
    let mut diff = vec![0.0; dims];
    for j in 0..dims {
        let d = mu_real[j] - mu_fake[j];
        loss += d * d;
        diff[j] = d;
    }
    let mut grad = Tensor::zeros(m_fake.shape.clone());
    for row in 0..b_fake {
        for j in 0..dims {
            grad.data[row * dims + j] = -2.0 * diff[j] / b_fake as f64;
        }
    }
    (loss, grad)
}

/// Abnormal-class probability from the discriminator's two class logits.
pub fn classify(discriminator: &mut Network, signals: &[Vec<f64>]) -> Vec<f64> {
    let x = rows_to_signal_tensor(signals);
    let logits = discriminator.infer(&x);
    let k = logits.shape[1];
    (0..logits.shape[0])
        .map(|b| {
            let row = &logits.data[b * k..][..k];
            let lse = logsumexp(row);
            (row[1] - lse).exp()
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct SslGanConfig {
    pub steps: usize,
    pub batch: usize,
    pub lr_d: f64,
    pub lr_g: f64,
    pub seed: u64,
    /// Drop the unsupervised terms and the generator entirely; this is the
    /// supervised baseline arm on the same discriminator.
    pub ablate_unsupervised: bool,
}

impl Default for SslGanConfig {
    fn default() -> Self {
        SslGanConfig { steps: 400, batch: 16, lr_d: 2e-4, lr_g: 2e-4, seed: 0, ablate_unsupervised: false }
    }
}

pub struct SslGanOutcome {
    pub discriminator: Network,
    pub generator: Option<Network>,
    pub history: Vec<GanLosses>,
}

/// Seed streams, exposed so tests can replay the exact training schedule.
pub fn discriminator_init_seed(seed: u64) -> u64 {
    SplitMix64::derive(seed, 10).next_u64()
}

pub fn generator_init_seed(seed: u64) -> u64 {
    SplitMix64::derive(seed, 11).next_u64()
}

pub fn sampler_stream(seed: u64) -> SplitMix64 {
    SplitMix64::derive(seed, 1)
}

/// Labelled batch indices: without replacement when the pool is large
/// enough, with replacement otherwise.
pub fn sample_labelled(rng: &mut SplitMix64, n: usize, batch: usize) -> Vec<usize> {
    if n >= batch {
        rng.sample_indices(n, batch)
    } else {
        (0..batch).map(|_| rng.below(n)).collect()
    }
}

fn gather(rows: &[Vec<f64>], idx: &[usize]) -> Vec<Vec<f64>> {
    idx.iter().map(|&i| rows[i].clone()).collect()
}

fn noise(rng: &mut SplitMix64, batch: usize, z_dim: usize) -> Tensor {
    let data: Vec<f64> = (0..batch * z_dim).map(|_| rng.normal()).collect();
    Tensor::new(vec![batch, z_dim], data)
}

/// Adversarial semi-supervised training. Per step: one discriminator update
/// on supervised + unsupervised terms, then one generator update on the
/// feature-matching loss with M(x) taken on unlabelled real data.
///
/// Draw order per step (from `sampler_stream(seed)`): labelled indices,
/// then (unless ablated) unlabelled indices, discriminator noise, generator
/// noise, feature-matching real indices.
pub fn train_ssl_gan(
    arch: &GanArch,
    labelled: (&[Vec<f64>], &[bool]),
    unlabelled: &[Vec<f64>],
    cfg: &SslGanConfig,
) -> Result<SslGanOutcome, ModelError> {
    let (x_lab, y_lab) = labelled;
    if x_lab.is_empty() || x_lab.len() != y_lab.len() {
        return Err(ModelError::DegenerateData("labelled set empty or mismatched".into()));
    }
    if !cfg.ablate_unsupervised && unlabelled.is_empty() {
        return Err(ModelError::DegenerateData("unlabelled set empty".into()));
    }
    for row in x_lab.iter().chain(unlabelled) {
        if row.len() != arch.signal_len {
            return Err(ModelError::InvalidConfig(format!(
                "signal length {} does not match architecture length {}",
                row.len(),
                arch.signal_len
            )));
        }
    }

    let mut d = Network::from_specs(&arch.d_specs, discriminator_init_seed(cfg.seed))?;
    let mut g = Network::from_specs(&arch.g_specs, generator_init_seed(cfg.seed))?;
    let mut adam_d = Adam::new(cfg.lr_d, 0.5, 0.999);
    let mut adam_g = Adam::new(cfg.lr_g, 0.5, 0.999);
    let mut sampler = sampler_stream(cfg.seed);
    let mut pass_rng = SplitMix64::derive(cfg.seed, 2);

    let classes: Vec<usize> = y_lab.iter().map(|&a| usize::from(a)).collect();
    let mut history = Vec::with_capacity(cfg.steps);

    for _ in 0..cfg.steps {
        // Discriminator update.
        let lab_idx = sample_labelled(&mut sampler, x_lab.len(), cfg.batch);
        let lab_rows = gather(x_lab, &lab_idx);
        let lab_classes: Vec<usize> = lab_idx.iter().map(|&i| classes[i]).collect();
        d.zero_grad();

        let x = rows_to_signal_tensor(&lab_rows);
        let mut pass = Pass { mode: Mode::Train, rng: &mut pass_rng };
        let logits = d.forward(&x, &mut pass);
        let (supervised, sup_grad) = softmax_cross_entropy(&logits, &lab_classes);
        d.backward(&sup_grad);

        let (unsup_real, unsup_fake, generator_fm) = if cfg.ablate_unsupervised {
            (0.0, 0.0, 0.0)
        } else {
            let unl_batch = cfg.batch.min(unlabelled.len());
            let unl_idx = sampler.sample_indices(unlabelled.len(), unl_batch);
            let x_unl = rows_to_signal_tensor(&gather(unlabelled, &unl_idx));
            let mut pass = Pass { mode: Mode::Train, rng: &mut pass_rng };
            let logits = d.forward(&x_unl, &mut pass);
            let (unsup_real, grad) = unsup_real_loss(&logits);
            d.backward(&grad);

            let z = noise(&mut sampler, cfg.batch, arch.z_dim);
            let mut pass = Pass { mode: Mode::Train, rng: &mut pass_rng };
            let fake = g.forward(&z, &mut pass);
            let mut pass = Pass { mode: Mode::Train, rng: &mut pass_rng };
            let fake_logits = d.forward(&fake, &mut pass);
            let (unsup_fake, grad) = unsup_fake_loss(&fake_logits);
            d.backward(&grad);

            adam_d.step(&mut d);

            // Generator update on feature matching.
            let z2 = noise(&mut sampler, cfg.batch, arch.z_dim);
            let fm_batch = cfg.batch.min(unlabelled.len());
            let fm_idx = sampler.sample_indices(unlabelled.len(), fm_batch);
            let x_real = rows_to_signal_tensor(&gather(unlabelled, &fm_idx));
            g.zero_grad();
            d.zero_grad();
            let mut pass = Pass { mode: Mode::Train, rng: &mut pass_rng };
            let (_, m_real) = d.forward_capture(&x_real, arch.feature_layer, &mut pass);
            let mut pass = Pass { mode: Mode::Train, rng: &mut pass_rng };
            let fake2 = g.forward(&z2, &mut pass);
            let mut pass = Pass { mode: Mode::Train, rng: &mut pass_rng };
            let (_, m_fake) = d.forward_capture(&fake2, arch.feature_layer, &mut pass);
            let (fm, grad_m_fake) = generator_feature_matching_loss(&m_real, &m_fake);
            let grad_fake = d.backward_from(arch.feature_layer, &grad_m_fake);
            g.backward(&grad_fake);
            adam_g.step(&mut g);

            (unsup_real, unsup_fake, fm)
        };
        if cfg.ablate_unsupervised {
            adam_d.step(&mut d);
        }

        let losses = GanLosses {
            supervised,
            unsup_real,
            unsup_fake,
            generator_fm,
            total_d: supervised + unsup_real + unsup_fake,
        };
        if !losses.is_finite() {
            return Err(ModelError::NonFinite("ssl gan training"));
        }
        history.push(losses);
    }

    Ok(SslGanOutcome {
        discriminator: d,
        generator: if cfg.ablate_unsupervised { None } else { Some(g) },
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use cardioscope_core::signal::{Label, Subset};

    #[test]
    fn full_arch_shape_chain() {
        let arch = GanArch::full();
        // Walk the discriminator spec and check every intermediate length.
        let mut len = arch.signal_len;
        let mut lengths = Vec::new();
        for spec in &arch.d_specs {
            if let LayerSpec::Conv1d { kernel, stride, .. } = spec {
                len = (len - kernel) / stride + 1;
                lengths.push(len);
            }
        }
        assert_eq!(lengths, vec![4980, 2487, 1240, 617, 305, 149, 71, 32]);

        // Generator lengths from the reshape onward.
        let mut len = 33;
        let mut g_lengths = Vec::new();
        for spec in &arch.g_specs {
            if let LayerSpec::ConvTranspose1d { kernel, stride, padding, .. } = spec {
                len = (len - 1) * stride + kernel - 2 * padding;
                g_lengths.push(len);
            }
        }
        assert_eq!(g_lengths, vec![72, 150, 306, 618, 1242, 2488, 4980, 4987]);
    }

    #[test]
    fn full_networks_forward_with_expected_shapes() {
        let arch = GanArch::full();
        let mut g = Network::from_specs(&arch.g_specs, 1).unwrap();
        let mut d = Network::from_specs(&arch.d_specs, 2).unwrap();
        let mut rng = SplitMix64::new(3);
        let z = noise(&mut rng, 2, arch.z_dim);
        let mut pass_rng = SplitMix64::new(4);
        let mut pass = Pass { mode: Mode::Train, rng: &mut pass_rng };
        let fake = g.forward(&z, &mut pass);
        assert_eq!(fake.shape, vec![2, 1, FULL_SIGNAL_LEN]);
        assert!(fake.data.iter().all(|v| (-1.0..=1.0).contains(v)), "tanh range");
        let mut pass = Pass { mode: Mode::Train, rng: &mut pass_rng };
        let (logits, features) = d.forward_capture(&fake, arch.feature_layer, &mut pass);
        assert_eq!(features.shape, vec![2, FULL_FEATURE_DIMS]);
        assert_eq!(logits.shape, vec![2, 2]);
    }

    #[test]
    fn prepare_gan_input_lengths() {
        let rec = |n: usize| AudioRecord {
            id: "r".into(),
            subset: Subset::E,
            sample_rate: 2000,
            samples: vec![0.25; n],
            label: Label::Normal,
        };
        // 120 s record.
        let long = prepare_gan_input(&rec(240_000)).unwrap();
        assert_eq!(long.len(), FULL_SIGNAL_LEN);
        // Exactly 5 s.
        assert_eq!(prepare_gan_input(&rec(10_000)).unwrap().len(), FULL_SIGNAL_LEN);
        // Shorter than 5 s: zero-padded first.
        let short = prepare_gan_input(&rec(4_000)).unwrap();
        assert_eq!(short.len(), FULL_SIGNAL_LEN);
        assert!(short[2_100..].iter().all(|&v| v == 0.0));
        // Zero record stays zero; range preserved.
        let zero = prepare_gan_input(&AudioRecord {
            samples: vec![0.0; 12_000],
            ..rec(0)
        })
        .unwrap();
        assert!(zero.iter().all(|&v| v == 0.0));
        assert!(prepare_gan_input(&rec(0)).is_err());
    }

    #[test]
    fn real_prob_values() {
        assert!((discriminator_real_prob(&[0.0, 0.0]) - 2.0 / 3.0).abs() < 1e-12);
        // Strongly negative logits: confident fake.
        let p = discriminator_real_prob(&[-50.0, -50.0]);
        assert!(p < 1e-20, "{p}");
        // Large logits do not overflow.
        let p = discriminator_real_prob(&[30.0, 30.0]);
        assert!(p > 1.0 - 1e-12);
        let p = discriminator_real_prob(&[1000.0, 1000.0]);
        assert!((p - 1.0).abs() < 1e-12 && p.is_finite());
    }

    #[test]
    fn real_and_fake_probabilities_sum_to_one() {
        for logits in [[0.3, -1.2], [5.0, 2.0], [-80.0, 40.0]] {
            let p_real = discriminator_real_prob(&logits);
            let lse = logsumexp(&logits);
            let p_fake = 1.0 / (1.0 + lse.exp());
            assert!((p_real + p_fake - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_logit_loss_values() {
        let logits = Tensor::new(vec![1, 2], vec![0.0, 0.0]);
        let (sup, _) = softmax_cross_entropy(&logits, &[0]);
        assert!((sup - std::f64::consts::LN_2).abs() < 1e-12);
        let (real, _) = unsup_real_loss(&logits);
        assert!((real + (2.0f64 / 3.0).ln()).abs() < 1e-12, "-ln(2/3) = {real}");
        let (fake, _) = unsup_fake_loss(&logits);
        assert!((fake + (1.0f64 / 3.0).ln()).abs() < 1e-12, "-ln(1/3) = {fake}");
    }

    #[test]
    fn loss_terms_finite_on_logit_grid() {
        for l0 in [-100.0, -10.0, 0.0, 10.0, 100.0] {
            for l1 in [-100.0, -10.0, 0.0, 10.0, 100.0] {
                let logits = Tensor::new(vec![1, 2], vec![l0, l1]);
                let (a, ga) = unsup_real_loss(&logits);
                let (b, gb) = unsup_fake_loss(&logits);
                let (c, gc) = softmax_cross_entropy(&logits, &[1]);
                assert!(a.is_finite() && b.is_finite() && c.is_finite());
                assert!(ga.is_finite() && gb.is_finite() && gc.is_finite());
            }
        }
    }

    #[test]
    fn unsup_gradients_match_finite_differences() {
        let mut rng = SplitMix64::new(5);
        for loss_fn in [unsup_real_loss as fn(&Tensor) -> (f64, Tensor), unsup_fake_loss] {
            let logits = Tensor::new(vec![3, 2], (0..6).map(|_| rng.normal()).collect());
            let (_, grad) = loss_fn(&logits);
            for i in 0..6 {
                let mut plus = logits.clone();
                plus.data[i] += 1e-6;
                let mut minus = logits.clone();
                minus.data[i] -= 1e-6;
                let fd = (loss_fn(&plus).0 - loss_fn(&minus).0) / 2e-6;
                assert!((fd - grad.data[i]).abs() < 1e-8, "{fd} vs {}", grad.data[i]);
            }
        }
    }

    #[test]
    fn feature_matching_values_and_gradient() {
        let a = Tensor::new(vec![2, 3], vec![1.0, 2.0, 3.0, 3.0, 2.0, 1.0]);
        let (loss, _) = generator_feature_matching_loss(&a, &a);
        assert_eq!(loss, 0.0);

        // Means differing by a unit vector give loss 1.
        let real = Tensor::new(vec![2, 3], vec![1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let fake = Tensor::new(vec![2, 3], vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let (loss, grad) = generator_feature_matching_loss(&real, &fake);
        assert!((loss - 1.0).abs() < 1e-12);
        // d loss / d m_fake = -2 (mu_real - mu_fake) / batch.
        assert!((grad.data[0] + 1.0).abs() < 1e-12);

        // Elementwise oracle on random batches.
        let mut rng = SplitMix64::new(6);
        let mr = Tensor::new(vec![4, 5], (0..20).map(|_| rng.normal()).collect());
        let mf = Tensor::new(vec![3, 5], (0..15).map(|_| rng.normal()).collect());
        let (loss, _) = generator_feature_matching_loss(&mr, &mf);
        let mut oracle = 0.0;
        for j in 0..5 {
            let mu_r: f64 = (0..4).map(|b| mr.data[b * 5 + j]).sum::<f64>() / 4.0;
            let mu_f: f64 = (0..3).map(|b| mf.data[b * 5 + j]).sum::<f64>() / 3.0;
            oracle += (mu_r - mu_f) * (mu_r - mu_f);
        }
        assert!((loss - oracle).abs() < 1e-12);
    }

    #[test]
    fn classify_softmax_values() {
        // classify uses softmax over 2 logits; check the arithmetic on a
        // stub network output by calling the same math directly.
        let row = [0.0, 2.0];
        let lse = logsumexp(&row);
        let p1 = (row[1] - lse).exp();
        assert!((p1 - 1.0 / (1.0 + (-2.0f64).exp())).abs() < 1e-12);
        // Shift invariance.
        let shifted = [10.0, 12.0];
        let lse2 = logsumexp(&shifted);
        assert!(((shifted[1] - lse2).exp() - p1).abs() < 1e-12);
    }

    #[test]
    fn tiny_labelled_set_trains_without_crashing() {
        let arch = GanArch::compact();
        let cfg_signals = cardioscope_core::synth::SignalTaskConfig::default();
        let (signals, labels) = cardioscope_core::synth::synthetic_signal_set(40, 0.5, &cfg_signals, 1);
        let lab: Vec<Vec<f64>> = signals[..4].to_vec();
        let lab_y: Vec<bool> = labels[..4].to_vec();
        let cfg = SslGanConfig { steps: 3, batch: 8, ..Default::default() };
        let out = train_ssl_gan(&arch, (&lab, &lab_y), &signals[4..], &cfg).unwrap();
        assert_eq!(out.history.len(), 3);
        assert!(out.generator.is_some());
    }

    #[test]
    fn zero_learning_rates_leave_parameters_unchanged() {
        let arch = GanArch::compact();
        let cfg_signals = cardioscope_core::synth::SignalTaskConfig::default();
        let (signals, labels) = cardioscope_core::synth::synthetic_signal_set(30, 0.5, &cfg_signals, 2);
        let cfg = SslGanConfig { steps: 4, batch: 8, lr_d: 0.0, lr_g: 0.0, seed: 5, ..Default::default() };
        let out = train_ssl_gan(&arch, (&signals[..10], &labels[..10]), &signals[10..], &cfg).unwrap();
        let mut fresh = Network::from_specs(&arch.d_specs, discriminator_init_seed(5)).unwrap();
        let mut trained = out.discriminator;
        assert_eq!(trained.export_state(), fresh.export_state());
    }
}
