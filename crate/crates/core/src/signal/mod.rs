//! Recording ingestion: WAV parsing, reference labels, manifests, splits,
//! and length preprocessing.

pub mod manifest;
pub mod preprocess;
pub mod split;
pub mod types;
pub mod wav;

pub use manifest::{load_reference, scan_dataset, DatasetManifest, ManifestRecord};
pub use preprocess::{decimate, pad_to, prune_to};
pub use split::{split_dataset, SplitSpec};
pub use types::{AudioRecord, Label, Subset};
pub use wav::{parse_wav, WavData};
