//! Model zoo: class-weighted trees, random forests, gradient boosting, an
//! SMO-trained SVM, one-class SVM and isolation forest anomaly detectors,
//! dense/CNN classifiers, a 1D CNN autoencoder, and the semi-supervised GAN.

pub mod anomaly;
pub mod boosting;
pub mod deep;
pub mod error;
pub mod experiment;
pub mod forest;
pub mod gan;
pub mod iforest;
pub mod ocsvm;
pub mod reference;
pub mod svm;
pub mod tree;

pub use anomaly::{
    assemble_protocol_data, derive_features, run_protocol, run_protocol_grid, AeTraining,
    AnomalyProtocol, DetectorKind, DetectorTraining, FeatureKind, LabelledFeatures, ProtocolRow,
    ProtocolRunConfig,
};
pub use boosting::{fit_gradient_boosting, BoostedModel, BoostingParams};
pub use deep::{
    build_autoencoder, build_cnn1d, build_dense_nn, predict_scores, reconstruction_loss,
    train_autoencoder, train_supervised, Autoencoder, EpochStats, TrainConfig,
};
pub use error::ModelError;
pub use experiment::{make_synthetic_task, synthetic_sweep, SyntheticSweepConfig, SyntheticTask};
pub use forest::{fit_random_forest, ForestModel, ForestParams};
pub use gan::{
    classify, discriminator_real_prob, generator_feature_matching_loss, prepare_gan_input,
    train_ssl_gan, GanArch, GanLosses, SslGanConfig, SslGanOutcome,
};
pub use iforest::{fit_iforest, IForestParams, IsolationForestModel};
pub use ocsvm::{fit_ocsvm, OcGamma, OcSvmModel, OcSvmParams};
pub use svm::{smo_fit_svm, Gamma, SvmModel, SvmParams};
pub use tree::{entropy, fit_decision_tree, ClassWeights, DecisionTree, TreeParams};
