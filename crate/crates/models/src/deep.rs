//! Network builders for the dense classifier, the 1D CNN classifier, and
//! the 1D CNN autoencoder, plus their training loops.

use cardioscope_autodiff::layer::{LayerSpec, Mode, Padding, Pass};
use cardioscope_autodiff::loss::{mse, sigmoid_bce_with_logits};
use cardioscope_autodiff::network::Network;
use cardioscope_autodiff::optim::Adam;
use cardioscope_autodiff::tensor::Tensor;
use cardioscope_core::eval::confusion_metrics;
use cardioscope_core::FEATURE_DIMS;
use cardioscope_rng::SplitMix64;

use crate::error::ModelError;

/// Latent width of the autoencoder bottleneck.
pub const LATENT_DIMS: usize = 96;

/// Four 128-wide ReLU layers and a sigmoid head on the 193 features.
pub fn dense_nn_specs() -> Vec<LayerSpec> {
    let mut specs = vec![
        LayerSpec::Dense { in_features: FEATURE_DIMS, out_features: 128 },
        LayerSpec::Relu,
    ];
    for _ in 0..3 {
        specs.push(LayerSpec::Dense { in_features: 128, out_features: 128 });
        specs.push(LayerSpec::Relu);
    }
    specs.push(LayerSpec::Dense { in_features: 128, out_features: 1 });
    specs.push(LayerSpec::Sigmoid);
    specs
}

/// 1D CNN classifier over the feature vector treated as a 193 x 1 sequence:
/// two conv blocks with pool 3/3, a third conv block, then dense layers.
pub fn cnn1d_specs() -> Vec<LayerSpec> {
    let conv = |c_in, c_out| LayerSpec::Conv1d {
        in_channels: c_in,
        out_channels: c_out,
        kernel: 3,
        stride: 1,
        padding: Padding::Valid,
    };
    vec![
        conv(1, 128),
        LayerSpec::Relu,
        conv(128, 128),
        LayerSpec::Relu,
        LayerSpec::MaxPool1d { kernel: 3, stride: 3 },
        conv(128, 256),
        LayerSpec::Relu,
        conv(256, 256),
        LayerSpec::Relu,
        LayerSpec::MaxPool1d { kernel: 3, stride: 3 },
        conv(256, 512),
        LayerSpec::Relu,
        conv(512, 512),
        LayerSpec::Relu,
        LayerSpec::Flatten,
        LayerSpec::Dense { in_features: 512 * 15, out_features: 256 },
        LayerSpec::Relu,
        LayerSpec::Dense { in_features: 256, out_features: 128 },
        LayerSpec::Relu,
        LayerSpec::Dense { in_features: 128, out_features: 1 },
        LayerSpec::Sigmoid,
    ]
}

/// Autoencoder over the 193-feature vector. The encoder halves the length
/// four times (193 -> 96 -> 48 -> 24 -> 12) while narrowing channels to 8,
/// giving a 12 x 8 = 96 latent; the decoder mirrors it with upsampling and a
/// final zero-pad back to 193.
pub fn autoencoder_specs() -> Vec<LayerSpec> {
    let conv = |c_in, c_out| LayerSpec::Conv1d {
        in_channels: c_in,
        out_channels: c_out,
        kernel: 3,
        stride: 1,
        padding: Padding::Same,
    };
    let pool = LayerSpec::MaxPool1d { kernel: 2, stride: 2 };
    vec![
        conv(1, 64),
        LayerSpec::Relu,
        pool.clone(),
        conv(64, 64),
        LayerSpec::Relu,
        pool.clone(),
        conv(64, 32),
        LayerSpec::Relu,
        pool.clone(),
        conv(32, 16),
        LayerSpec::Relu,
        pool.clone(),
        conv(16, 8),
        LayerSpec::Relu,
        LayerSpec::Flatten, // latent: 8 channels x 12 = 96
        LayerSpec::Reshape { channels: 8, length: 12 },
        conv(8, 8),
        LayerSpec::Relu,
        LayerSpec::Upsample1d { factor: 2 },
        conv(8, 16),
        LayerSpec::Relu,
        LayerSpec::Upsample1d { factor: 2 },
        conv(16, 32),
        LayerSpec::Relu,
        LayerSpec::Upsample1d { factor: 2 },
        conv(32, 64),
        LayerSpec::Relu,
        LayerSpec::Upsample1d { factor: 2 },
        LayerSpec::ZeroPad1d { left: 0, right: 1 },
        conv(64, 1),
    ]
}

pub fn build_dense_nn(seed: u64) -> Network {
    Network::from_specs(&dense_nn_specs(), seed).expect("dense spec is valid")
}

pub fn build_cnn1d(seed: u64) -> Network {
    Network::from_specs(&cnn1d_specs(), seed).expect("cnn spec is valid")
}

/// Autoencoder with its encoder prefix recorded.
pub struct Autoencoder {
    pub net: Network,
    /// Number of layers in the encoder (forward prefix up to the latent).
    encoder_len: usize,
}

pub fn build_autoencoder(seed: u64) -> Autoencoder {
    let specs = autoencoder_specs();
    let encoder_len = specs
        .iter()
        .position(|s| matches!(s, LayerSpec::Flatten))
        .expect("autoencoder has a flatten latent")
        + 1;
    Autoencoder { net: Network::from_specs(&specs, seed).expect("autoencoder spec is valid"), encoder_len }
}

impl Autoencoder {
    pub fn from_network(net: Network) -> Autoencoder {
        let encoder_len = net
            .specs()
            .iter()
            .position(|s| matches!(s, LayerSpec::Flatten))
            .expect("network has a flatten latent")
            + 1;
        Autoencoder { net, encoder_len }
    }

    /// Encoder-only forward: the 96-d latent per row.
    pub fn encode(&mut self, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let x = rows_to_signal_tensor(rows);
        let mut rng = SplitMix64::new(0);
        let mut pass = Pass { mode: Mode::Eval, rng: &mut rng };
        let latent = self.net.forward_prefix(&x, self.encoder_len, &mut pass);
        tensor_to_rows(&latent)
    }

    /// Full forward: reconstruction of each row.
    pub fn reconstruct(&mut self, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let x = rows_to_signal_tensor(rows);
        let out = self.net.infer(&x);
        tensor_to_rows(&out)
    }

    /// Mean squared reconstruction error per row.
    pub fn reconstruction_losses(&mut self, rows: &[Vec<f64>]) -> Vec<f64> {
        let recon = self.reconstruct(rows);
        rows.iter().zip(&recon).map(|(a, b)| reconstruction_loss(a, b)).collect()
    }
}

/// Mean over elements of the squared difference.
pub fn reconstruction_loss(x: &[f64], x_rec: &[f64]) -> f64 {
    assert_eq!(x.len(), x_rec.len(), "length mismatch");
    x.iter().zip(x_rec).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / x.len() as f64
}

/// Pack feature rows as a [batch, 1, len] signal tensor.
pub fn rows_to_signal_tensor(rows: &[Vec<f64>]) -> Tensor {
    let len = rows[0].len();
    let mut data = Vec::with_capacity(rows.len() * len);
    for r in rows {
        assert_eq!(r.len(), len, "ragged rows");
        data.extend_from_slice(r);
    }
    Tensor::new(vec![rows.len(), 1, len], data)
}

/// Pack feature rows as a [batch, features] dense tensor.
pub fn rows_to_dense_tensor(rows: &[Vec<f64>]) -> Tensor {
    let len = rows[0].len();
    let mut data = Vec::with_capacity(rows.len() * len);
    for r in rows {
        data.extend_from_slice(r);
    }
    Tensor::new(vec![rows.len(), len], data)
}

fn tensor_to_rows(t: &Tensor) -> Vec<Vec<f64>> {
    let batch = t.shape[0];
    let rest = t.numel() / batch;
    (0..batch).map(|b| t.data[b * rest..(b + 1) * rest].to_vec()).collect()
}

/// Whether a network's first layer consumes [batch, 1, len] signals rather
/// than [batch, features] rows.
fn wants_signal_input(net: &Network) -> bool {
    matches!(net.specs().first(), Some(LayerSpec::Conv1d { .. }))
}

fn input_tensor(net: &Network, rows: &[Vec<f64>]) -> Tensor {
    if wants_signal_input(net) {
        rows_to_signal_tensor(rows)
    } else {
        rows_to_dense_tensor(rows)
    }
}

#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch: usize,
    pub lr: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig { epochs: 100, batch: 32, lr: 1e-3, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_loss: f64,
    pub val_loss: f64,
    pub val_macc: f64,
}

/// History CSV: "epoch,train_loss,val_loss,val_macc".
pub fn write_history_csv(history: &[EpochStats]) -> String {
    let mut out = String::from("epoch,train_loss,val_loss,val_macc\n");
    for h in history {
        out.push_str(&format!("{},{:.6},{:.6},{:.6}\n", h.epoch, h.train_loss, h.val_loss, h.val_macc));
    }
    out
}

/// Supervised binary training with BCE loss. The network must end in a
/// sigmoid; training runs against the pre-sigmoid logits for stability.
/// Early stopping keeps the parameters of the best validation-MAcc epoch.
pub fn train_supervised(
    net: &mut Network,
    train: (&[Vec<f64>], &[bool]),
    val: (&[Vec<f64>], &[bool]),
    cfg: &TrainConfig,
) -> Result<Vec<EpochStats>, ModelError> {
    let (x_train, y_train) = train;
    let (x_val, y_val) = val;
    if x_train.is_empty() || x_train.len() != y_train.len() {
        return Err(ModelError::DegenerateData("empty training set or length mismatch".into()));
    }
    if !matches!(net.specs().last(), Some(LayerSpec::Sigmoid)) {
        return Err(ModelError::InvalidConfig("supervised net must end in a sigmoid".into()));
    }
    let logits_len = net.len() - 1;

    let mut adam = Adam::standard(cfg.lr);
    let mut shuffle_rng = SplitMix64::derive(cfg.seed, 1);
    let mut dropout_rng = SplitMix64::derive(cfg.seed, 2);

    let mut history = Vec::with_capacity(cfg.epochs);
    let mut best: Option<(f64, Vec<Vec<f64>>)> = None;
    let mut order: Vec<usize> = (0..x_train.len()).collect();

    for epoch in 0..cfg.epochs {
        shuffle_rng.shuffle(&mut order);
        let mut epoch_loss = 0.0;
        let mut batches = 0.0;
        for chunk in order.chunks(cfg.batch) {
            let rows: Vec<Vec<f64>> = chunk.iter().map(|&i| x_train[i].clone()).collect();
            let targets: Vec<f64> = chunk.iter().map(|&i| f64::from(y_train[i])).collect();
            let x = input_tensor(net, &rows);
            let mut pass = Pass { mode: Mode::Train, rng: &mut dropout_rng };
            let logits = net.forward_prefix(&x, logits_len, &mut pass);
            let (loss, grad) = sigmoid_bce_with_logits(&logits, &targets);
            if !loss.is_finite() {
                return Err(ModelError::NonFinite("supervised training"));
            }
            net.zero_grad();
            net.backward_from(logits_len - 1, &grad);
            adam.step(net);
            epoch_loss += loss;
            batches += 1.0;
        }
        let train_loss = epoch_loss / batches;

        let (val_loss, val_macc) = if x_val.is_empty() {
            (f64::NAN, f64::NAN)
        } else {
            let scores = predict_scores(net, x_val);
            let targets: Vec<f64> = y_val.iter().map(|&b| f64::from(b)).collect();
            let loss = scores
                .iter()
                .zip(&targets)
                .map(|(&p, &t)| cardioscope_autodiff::loss::bce(p, t))
                .sum::<f64>()
                / scores.len() as f64;
            let macc = confusion_metrics(&scores, y_val, 0.5).map(|r| r.macc).unwrap_or(f64::NAN);
            (loss, macc)
        };
        history.push(EpochStats { epoch, train_loss, val_loss, val_macc });

        if val_macc.is_finite() {
            let improved = best.as_ref().map(|(m, _)| val_macc > *m).unwrap_or(true);
            if improved {
                best = Some((val_macc, net.export_state()));
            }
        }
    }
    if let Some((_, state)) = best {
        net.import_state(&state);
    }
    Ok(history)
}

/// Probability scores from a sigmoid-headed network.
pub fn predict_scores(net: &mut Network, rows: &[Vec<f64>]) -> Vec<f64> {
    let x = input_tensor(net, rows);
    let out = net.infer(&x);
    out.data.clone()
}

/// Unsupervised autoencoder training with MSE reconstruction loss.
/// Returns per-epoch training losses.
pub fn train_autoencoder(
    ae: &mut Autoencoder,
    rows: &[Vec<f64>],
    cfg: &TrainConfig,
) -> Result<Vec<f64>, ModelError> {
    if rows.is_empty() {
        return Err(ModelError::DegenerateData("empty training set".into()));
    }
    let mut adam = Adam::standard(cfg.lr);
    let mut shuffle_rng = SplitMix64::derive(cfg.seed, 1);
    let mut dropout_rng = SplitMix64::derive(cfg.seed, 2);
    let mut order: Vec<usize> = (0..rows.len()).collect();
    let mut losses = Vec::with_capacity(cfg.epochs);

    for _ in 0..cfg.epochs {
        shuffle_rng.shuffle(&mut order);
        let mut epoch_loss = 0.0;
        let mut batches = 0.0;
        for chunk in order.chunks(cfg.batch) {
            let batch_rows: Vec<Vec<f64>> = chunk.iter().map(|&i| rows[i].clone()).collect();
            let x = rows_to_signal_tensor(&batch_rows);
            let mut pass = Pass { mode: Mode::Train, rng: &mut dropout_rng };
            let out = ae.net.forward(&x, &mut pass);
            let (loss, grad) = mse(&out, &x);
            if !loss.is_finite() {
                return Err(ModelError::NonFinite("autoencoder training"));
            }
            ae.net.zero_grad();
            ae.net.backward(&grad);
            adam.step(&mut ae.net);
            epoch_loss += loss;
            batches += 1.0;
        }
        losses.push(epoch_loss / batches);
    }
    Ok(losses)
}
