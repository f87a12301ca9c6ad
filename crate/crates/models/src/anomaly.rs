//! Unsupervised anomaly-detection protocol: train the autoencoder (clean or
//! contaminated), derive embedding or reconstruction-loss features, fit a
//! detector, and score the untouched test set.

use cardioscope_core::eval::auroc;
use cardioscope_core::Standardizer;
use cardioscope_rng::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::deep::{build_autoencoder, train_autoencoder, Autoencoder, TrainConfig};
use crate::error::ModelError;
use crate::iforest::{fit_iforest, IForestParams};
use crate::ocsvm::{fit_ocsvm, OcSvmParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AeTraining {
    NormalOnly,
    EntireData,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DetectorTraining {
    Normal,
    Contaminated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeatureKind {
    Embeddings,
    RecLoss,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DetectorKind {
    Ocsvm,
    IForest,
}

impl std::fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DetectorKind::Ocsvm => write!(f, "one_class_svm"),
            DetectorKind::IForest => write!(f, "isolation_forest"),
        }
    }
}

impl std::fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FeatureKind::Embeddings => write!(f, "embeddings"),
            FeatureKind::RecLoss => write!(f, "rec_loss"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnomalyProtocol {
    pub ae_training: AeTraining,
    pub detector_training: DetectorTraining,
    /// Fraction of abnormal rows in the contaminated detector training set.
    pub contamination_rate: f64,
    pub feature_kind: FeatureKind,
    pub detector: DetectorKind,
    pub seed: u64,
}

impl AnomalyProtocol {
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.detector_training == DetectorTraining::Contaminated
            && !(0.08..=0.12).contains(&self.contamination_rate)
        {
            return Err(ModelError::InvalidConfig(format!(
                "contamination rate {} outside [0.08, 0.12]",
                self.contamination_rate
            )));
        }
        Ok(())
    }
}

/// Labelled feature set (true = Abnormal).
#[derive(Debug, Clone)]
pub struct LabelledFeatures {
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<bool>,
}

impl LabelledFeatures {
    pub fn new(rows: Vec<Vec<f64>>, labels: Vec<bool>) -> Self {
        assert_eq!(rows.len(), labels.len());
        LabelledFeatures { rows, labels }
    }

    fn class_rows(&self, abnormal: bool) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .zip(&self.labels)
            .filter(|(_, &l)| l == abnormal)
            .map(|(r, _)| r.clone())
            .collect()
    }
}

/// Data assembled for one protocol run.
#[derive(Debug, Clone)]
pub struct ProtocolData {
    pub ae_train: Vec<Vec<f64>>,
    pub detector_train: Vec<Vec<f64>>,
    pub test: Vec<Vec<f64>>,
    pub test_truth: Vec<bool>,
}

/// Filter the training split per the protocol; the test set is untouched.
/// Contamination injects abnormal rows so that abnormal/total equals the
/// requested rate, sampled deterministically by seed.
pub fn assemble_protocol_data(
    train: &LabelledFeatures,
    test: &LabelledFeatures,
    protocol: &AnomalyProtocol,
) -> Result<ProtocolData, ModelError> {
    protocol.validate()?;
    let normals = train.class_rows(false);
    let abnormals = train.class_rows(true);

    let ae_train = match protocol.ae_training {
        AeTraining::NormalOnly => normals.clone(),
        AeTraining::EntireData => train.rows.clone(),
    };

    let detector_train = match protocol.detector_training {
        DetectorTraining::Normal => normals.clone(),
        DetectorTraining::Contaminated => {
            let rate = protocol.contamination_rate;
            // abnormal / (normal + abnormal) = rate
            let needed = ((rate / (1.0 - rate)) * normals.len() as f64).round() as usize;
            if needed > abnormals.len() {
                return Err(ModelError::InsufficientAbnormal { needed, available: abnormals.len() });
            }
            let mut rng = SplitMix64::derive(protocol.seed, 3);
            let picks = rng.sample_indices(abnormals.len(), needed);
            let mut rows = normals.clone();
            rows.extend(picks.into_iter().map(|i| abnormals[i].clone()));
            rows
        }
    };

    if ae_train.is_empty() || detector_train.is_empty() {
        return Err(ModelError::DegenerateData("protocol produced an empty training set".into()));
    }
    Ok(ProtocolData {
        ae_train,
        detector_train,
        test: test.rows.clone(),
        test_truth: test.labels.clone(),
    })
}

/// Feature matrix for the detector: 96-d embeddings or the 1-d
/// reconstruction loss per sample.
pub fn derive_features(ae: &mut Autoencoder, rows: &[Vec<f64>], kind: FeatureKind) -> Vec<Vec<f64>> {
    match kind {
        FeatureKind::Embeddings => ae.encode(rows),
        FeatureKind::RecLoss => ae.reconstruction_losses(rows).into_iter().map(|l| vec![l]).collect(),
    }
}

/// One report row of the protocol grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolRow {
    pub ae_training: AeTraining,
    pub detector: DetectorKind,
    pub feature_kind: FeatureKind,
    pub detector_training: DetectorTraining,
    pub outcome: Result<f64, String>,
}

/// Hyperparameters of a protocol run that are not part of the protocol
/// definition itself.
#[derive(Debug, Clone)]
pub struct ProtocolRunConfig {
    pub ae_epochs: usize,
    pub ae_batch: usize,
    pub ae_lr: f64,
    pub ocsvm: OcSvmParams,
    pub iforest_trees: usize,
    pub iforest_psi: usize,
}

impl Default for ProtocolRunConfig {
    fn default() -> Self {
        ProtocolRunConfig {
            ae_epochs: 30,
            ae_batch: 32,
            ae_lr: 1e-3,
            ocsvm: OcSvmParams::default(),
            iforest_trees: 100,
            iforest_psi: 256,
        }
    }
}

/// Execute one protocol cell end to end and return its report row.
pub fn run_protocol(
    train: &LabelledFeatures,
    test: &LabelledFeatures,
    protocol: &AnomalyProtocol,
    run_cfg: &ProtocolRunConfig,
) -> Result<ProtocolRow, ModelError> {
    let data = assemble_protocol_data(train, test, protocol)?;

    // Standardize on the autoencoder's training set only.
    let standardizer = Standardizer::fit(&data.ae_train);
    let ae_train = standardizer.transform(&data.ae_train);
    let det_train = standardizer.transform(&data.detector_train);
    let test_rows = standardizer.transform(&data.test);

    let mut ae = build_autoencoder(SplitMix64::derive(protocol.seed, 4).next_u64());
    let cfg = TrainConfig {
        epochs: run_cfg.ae_epochs,
        batch: run_cfg.ae_batch,
        lr: run_cfg.ae_lr,
        seed: SplitMix64::derive(protocol.seed, 5).next_u64(),
    };
    train_autoencoder(&mut ae, &ae_train, &cfg)?;

    let det_features = derive_features(&mut ae, &det_train, protocol.feature_kind);
    let test_features = derive_features(&mut ae, &test_rows, protocol.feature_kind);

    let scores: Vec<f64> = match protocol.detector {
        DetectorKind::Ocsvm => {
            let model = fit_ocsvm(&det_features, &run_cfg.ocsvm)?;
            test_features.iter().map(|r| model.score(r)).collect()
        }
        DetectorKind::IForest => {
            let params = IForestParams {
                n_trees: run_cfg.iforest_trees,
                psi: run_cfg.iforest_psi,
                seed: SplitMix64::derive(protocol.seed, 6).next_u64(),
            };
            let model = fit_iforest(&det_features, &params)?;
            test_features.iter().map(|r| model.score(r)).collect()
        }
    };

    let outcome = auroc(&scores, &data.test_truth).map_err(|e| e.to_string());
    Ok(ProtocolRow {
        ae_training: protocol.ae_training,
        detector: protocol.detector,
        feature_kind: protocol.feature_kind,
        detector_training: protocol.detector_training,
        outcome,
    })
}

/// Run the 2x2x2 grid (detector x features x detector-training) for one
/// autoencoder-training mode.
pub fn run_protocol_grid(
    train: &LabelledFeatures,
    test: &LabelledFeatures,
    ae_training: AeTraining,
    contamination_rate: f64,
    seed: u64,
    run_cfg: &ProtocolRunConfig,
) -> Result<Vec<ProtocolRow>, ModelError> {
    let mut rows = Vec::with_capacity(8);
    for detector in [DetectorKind::IForest, DetectorKind::Ocsvm] {
        for feature_kind in [FeatureKind::Embeddings, FeatureKind::RecLoss] {
            for detector_training in [DetectorTraining::Normal, DetectorTraining::Contaminated] {
                let protocol = AnomalyProtocol {
                    ae_training,
                    detector_training,
                    contamination_rate,
                    feature_kind,
                    detector,
                    seed,
                };
                rows.push(run_protocol(train, test, &protocol, run_cfg)?);
            }
        }
    }
    Ok(rows)
}

/// Report CSV: "detector,features,labels,auroc" (error text in the auroc
/// column when the cell could not be scored).
pub fn write_protocol_csv(rows: &[ProtocolRow]) -> String {
    let mut out = String::from("detector,features,labels,auroc\n");
    for row in rows {
        let labels = match row.detector_training {
            DetectorTraining::Normal => "Normal",
            DetectorTraining::Contaminated => "Contaminated",
        };
        match &row.outcome {
            Ok(v) => out.push_str(&format!("{},{},{},{:.6}\n", row.detector, row.feature_kind, labels, v)),
            Err(e) => out.push_str(&format!("{},{},{},error: {}\n", row.detector, row.feature_kind, labels, e)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use cardioscope_core::synth::subspace_points;
    use cardioscope_core::FEATURE_DIMS;

    fn toy_sets(n_normal: usize, n_abnormal: usize) -> (LabelledFeatures, LabelledFeatures) {
        let normal = subspace_points(n_normal + 40, FEATURE_DIMS, 6, 0.05, 7, 1);
        let abnormal = subspace_points(n_abnormal + 40, FEATURE_DIMS, 6, 0.05, 99, 2);
        let mut train_rows = normal[..n_normal].to_vec();
        let mut train_labels = vec![false; n_normal];
        train_rows.extend(abnormal[..n_abnormal].to_vec());
        train_labels.extend(vec![true; n_abnormal]);
        let mut test_rows = normal[n_normal..].to_vec();
        let mut test_labels = vec![false; 40];
        test_rows.extend(abnormal[n_abnormal..].to_vec());
        test_labels.extend(vec![true; 40]);
        (LabelledFeatures::new(train_rows, train_labels), LabelledFeatures::new(test_rows, test_labels))
    }

    #[test]
    fn normal_only_assembly_filters_abnormal() {
        let (train, test) = toy_sets(60, 20);
        let protocol = AnomalyProtocol {
            ae_training: AeTraining::NormalOnly,
            detector_training: DetectorTraining::Normal,
            contamination_rate: 0.1,
            feature_kind: FeatureKind::Embeddings,
            detector: DetectorKind::Ocsvm,
            seed: 1,
        };
        let data = assemble_protocol_data(&train, &test, &protocol).unwrap();
        assert_eq!(data.ae_train.len(), 60);
        assert_eq!(data.detector_train.len(), 60);
        assert_eq!(data.test.len(), 80);
    }

    #[test]
    fn contamination_rate_arithmetic() {
        // 900 normal at rate 0.10 -> 100 abnormal injected.
        let (train, test) = toy_sets(900, 150);
        let protocol = AnomalyProtocol {
            ae_training: AeTraining::NormalOnly,
            detector_training: DetectorTraining::Contaminated,
            contamination_rate: 0.10,
            feature_kind: FeatureKind::Embeddings,
            detector: DetectorKind::Ocsvm,
            seed: 1,
        };
        let data = assemble_protocol_data(&train, &test, &protocol).unwrap();
        assert_eq!(data.detector_train.len(), 1000);
    }

    #[test]
    fn entire_data_assembly_keeps_all_rows() {
        let (train, test) = toy_sets(50, 30);
        let protocol = AnomalyProtocol {
            ae_training: AeTraining::EntireData,
            detector_training: DetectorTraining::Normal,
            contamination_rate: 0.1,
            feature_kind: FeatureKind::RecLoss,
            detector: DetectorKind::IForest,
            seed: 1,
        };
        let data = assemble_protocol_data(&train, &test, &protocol).unwrap();
        assert_eq!(data.ae_train.len(), 80);
    }

    #[test]
    fn insufficient_abnormal_flagged() {
        let (train, test) = toy_sets(500, 3);
        let protocol = AnomalyProtocol {
            ae_training: AeTraining::NormalOnly,
            detector_training: DetectorTraining::Contaminated,
            contamination_rate: 0.1,
            feature_kind: FeatureKind::Embeddings,
            detector: DetectorKind::Ocsvm,
            seed: 1,
        };
        assert!(matches!(
            assemble_protocol_data(&train, &test, &protocol),
            Err(ModelError::InsufficientAbnormal { .. })
        ));
    }

    #[test]
    fn out_of_band_contamination_rejected() {
        let protocol = AnomalyProtocol {
            ae_training: AeTraining::NormalOnly,
            detector_training: DetectorTraining::Contaminated,
            contamination_rate: 0.3,
            feature_kind: FeatureKind::Embeddings,
            detector: DetectorKind::Ocsvm,
            seed: 1,
        };
        assert!(protocol.validate().is_err());
    }

    #[test]
    fn degenerate_test_set_yields_error_row() {
        let (train, mut test) = toy_sets(40, 10);
        test.labels.iter_mut().for_each(|l| *l = false);
        let protocol = AnomalyProtocol {
            ae_training: AeTraining::NormalOnly,
            detector_training: DetectorTraining::Normal,
            contamination_rate: 0.1,
            feature_kind: FeatureKind::RecLoss,
            detector: DetectorKind::IForest,
            seed: 1,
        };
        let run_cfg = ProtocolRunConfig { ae_epochs: 1, ..Default::default() };
        let row = run_protocol(&train, &test, &protocol, &run_cfg).unwrap();
        assert!(row.outcome.is_err());
        let csv = write_protocol_csv(&[row]);
        assert!(csv.contains("error:"));
    }

    #[test]
    fn fixed_seed_reproduces_report() {
        let (train, test) = toy_sets(50, 15);
        let protocol = AnomalyProtocol {
            ae_training: AeTraining::NormalOnly,
            detector_training: DetectorTraining::Normal,
            contamination_rate: 0.1,
            feature_kind: FeatureKind::Embeddings,
            detector: DetectorKind::IForest,
            seed: 9,
        };
        let run_cfg = ProtocolRunConfig { ae_epochs: 2, ..Default::default() };
        let a = run_protocol(&train, &test, &protocol, &run_cfg).unwrap();
        let b = run_protocol(&train, &test, &protocol, &run_cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn derived_feature_shapes() {
        let mut ae = build_autoencoder(3);
        let rows = vec![vec![0.2; FEATURE_DIMS]; 5];
        let emb = derive_features(&mut ae, &rows, FeatureKind::Embeddings);
        assert_eq!((emb.len(), emb[0].len()), (5, 96));
        let rl = derive_features(&mut ae, &rows, FeatureKind::RecLoss);
        assert_eq!((rl.len(), rl[0].len()), (5, 1));
    }
}
