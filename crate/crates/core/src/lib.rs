//! Core library for heart-sound classification experiments: dataset
//! ingestion and splitting, the 193-dimensional audio feature extraction,
//! SMOTE balancing, evaluation metrics, and synthetic data generators.

pub mod balance;
pub mod dsp;
pub mod error;
pub mod eval;
pub mod mat;
pub mod signal;
pub mod stats;
pub mod synth;

pub use balance::{smote, BalancedSet};
pub use dsp::{extract_feature_vector, FeatureRow, FeatureVector193, FEATURE_DIMS};
pub use error::{BalanceError, DspError, MetricError, SignalError};
pub use eval::{auroc, confusion_metrics, EvalReport};
pub use signal::{AudioRecord, DatasetManifest, Label, SplitSpec, Subset};
pub use stats::Standardizer;
