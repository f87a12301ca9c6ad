//! Audio feature extraction: STFT and the five feature families whose
//! concatenation forms the 193-dimensional representation of a recording.

pub mod chroma;
pub mod contrast;
pub mod features;
pub mod fft;
pub mod mel;
pub mod mfcc;
pub mod stft;
pub mod tonnetz;

pub use features::{
    extract_feature_vector, read_feature_csv, write_feature_csv, FeatureRow, FeatureVector193,
    FEATURE_DIMS,
};
pub use mel::{mel_filterbank, mel_spectrogram, MelFilterbank};
pub use stft::{stft, StftFrame, StftParams};
