//! Deterministic stratified train/validation/test splitting.

use std::collections::BTreeMap;

use cardioscope_rng::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::error::SignalError;
use crate::signal::manifest::DatasetManifest;
use crate::signal::types::Label;

/// Membership of each record id in one of the three splits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub seed: u64,
    pub train: Vec<String>,
    pub val: Vec<String>,
    pub test: Vec<String>,
}

impl SplitSpec {
    pub fn sizes(&self) -> (usize, usize, usize) {
        (self.train.len(), self.val.len(), self.test.len())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("split serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

fn round_half_away(x: f64) -> usize {
    x.round() as usize
}

/// Split a manifest into train/val/test at the given ratios, stratified by
/// label, reproducibly for a fixed seed.
///
/// Per label class: the test share is rounded per class, then the validation
/// share is taken from the class remainder (val_ratio relative to
/// train+val), and training receives the rest. Both labelled classes must be
/// present.
pub fn split_dataset(
    manifest: &DatasetManifest,
    ratios: (f64, f64, f64),
    seed: u64,
) -> Result<SplitSpec, SignalError> {
    let (r_train, r_val, r_test) = ratios;
    if (r_train + r_val + r_test - 1.0).abs() > 1e-9 || r_train < 0.0 || r_val < 0.0 || r_test < 0.0 {
        return Err(SignalError::BadRatios([r_train, r_val, r_test]));
    }
    if manifest.is_empty() {
        return Err(SignalError::DataMissing("manifest is empty".into()));
    }
    for required in [Label::Normal, Label::Abnormal] {
        if manifest.label_count(required) == 0 {
            return Err(SignalError::EmptyClass(format!("{required:?}")));
        }
    }

    let mut by_class: BTreeMap<i8, Vec<String>> = BTreeMap::new();
    for r in &manifest.records {
        by_class.entry(r.label.to_code()).or_default().push(r.id.clone());
    }

    let mut train = Vec::new();
    let mut val = Vec::new();
    let mut test = Vec::new();
    for (class_idx, (_, ids)) in by_class.iter_mut().enumerate() {
        ids.sort(); // canonical order before shuffling
        let mut rng = SplitMix64::derive(seed, class_idx as u64);
        rng.shuffle(ids);

        let n = ids.len();
        let n_test = round_half_away(r_test * n as f64).min(n);
        let rest = n - n_test;
        let val_share = if r_train + r_val > 0.0 { r_val / (r_train + r_val) } else { 0.0 };
        let n_val = round_half_away(val_share * rest as f64).min(rest);
        let n_train = rest - n_val;

        train.extend_from_slice(&ids[..n_train]);
        val.extend_from_slice(&ids[n_train..n_train + n_val]);
        test.extend_from_slice(&ids[n_train + n_val..]);
    }
    train.sort();
    val.sort();
    test.sort();
    Ok(SplitSpec { seed, train, val, test })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::manifest::ManifestRecord;
    use crate::signal::types::Subset;
    use std::path::PathBuf;

    fn manifest_with_counts(normal: usize, abnormal: usize) -> DatasetManifest {
        let mut records = Vec::new();
        for i in 0..normal {
            records.push(ManifestRecord {
                id: format!("n{i:05}"),
                path: PathBuf::from(format!("n{i:05}.wav")),
                subset: Subset::E,
                label: Label::Normal,
            });
        }
        for i in 0..abnormal {
            records.push(ManifestRecord {
                id: format!("a{i:05}"),
                path: PathBuf::from(format!("a{i:05}.wav")),
                subset: Subset::E,
                label: Label::Abnormal,
            });
        }
        DatasetManifest::from_records(records).unwrap()
    }

    const RATIOS: (f64, f64, f64) = (0.72, 0.08, 0.20);

    #[test]
    fn full_corpus_split_sizes() {
        // 3,240 recordings: 2,575 normal + 665 abnormal.
        let m = manifest_with_counts(2575, 665);
        let split = split_dataset(&m, RATIOS, 1).unwrap();
        assert_eq!(split.sizes(), (2333, 259, 648));
    }

    #[test]
    fn subset_e_split_sizes() {
        // Sub-dataset E: 2,141 recordings, 1,958 normal + 183 abnormal.
        let m = manifest_with_counts(1958, 183);
        let split = split_dataset(&m, RATIOS, 1).unwrap();
        assert_eq!(split.sizes(), (1540, 172, 429));
    }

    #[test]
    fn deterministic_per_seed() {
        let m = manifest_with_counts(80, 20);
        let a = split_dataset(&m, RATIOS, 42).unwrap();
        let b = split_dataset(&m, RATIOS, 42).unwrap();
        assert_eq!(a, b);
        let c = split_dataset(&m, RATIOS, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn partition_is_exact_and_disjoint() {
        let m = manifest_with_counts(137, 41);
        let split = split_dataset(&m, RATIOS, 9).unwrap();
        let mut all: Vec<&String> = split.train.iter().chain(&split.val).chain(&split.test).collect();
        assert_eq!(all.len(), m.len());
        all.sort();
        all.dedup();
        assert_eq!(all.len(), m.len(), "splits overlap or drop ids");
    }

    #[test]
    fn per_class_counts_sum_to_manifest_counts() {
        let m = manifest_with_counts(113, 57);
        let split = split_dataset(&m, RATIOS, 3).unwrap();
        let count_class = |ids: &[String], prefix: char| ids.iter().filter(|id| id.starts_with(prefix)).count();
        for (prefix, total) in [('n', 113), ('a', 57)] {
            let sum = count_class(&split.train, prefix) + count_class(&split.val, prefix) + count_class(&split.test, prefix);
            assert_eq!(sum, total);
        }
    }

    #[test]
    fn stratification_within_one_sample() {
        let m = manifest_with_counts(300, 100);
        let split = split_dataset(&m, RATIOS, 5).unwrap();
        let abnormal_share = 100.0 / 400.0;
        for ids in [&split.train, &split.val, &split.test] {
            let got = ids.iter().filter(|id| id.starts_with('a')).count() as f64;
            let expected = abnormal_share * ids.len() as f64;
            assert!((got - expected).abs() <= 1.0, "got {got}, expected {expected}");
        }
    }

    #[test]
    fn missing_class_is_an_error() {
        let m = manifest_with_counts(10, 0);
        assert!(matches!(split_dataset(&m, RATIOS, 1), Err(SignalError::EmptyClass(_))));
    }

    #[test]
    fn bad_ratios_rejected() {
        let m = manifest_with_counts(10, 10);
        assert!(matches!(split_dataset(&m, (0.5, 0.2, 0.2), 1), Err(SignalError::BadRatios(_))));
    }
}
