//! Dataset manifests: reference-label parsing and directory scanning.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::SignalError;
use crate::signal::types::{Label, Subset};
use crate::signal::wav::parse_wav;

/// One manifest row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub id: String,
    pub path: PathBuf,
    pub subset: Subset,
    pub label: Label,
}

/// Inventory of a dataset directory with per-(subset, label) counts.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub records: Vec<ManifestRecord>,
    pub counts: BTreeMap<String, usize>,
}

impl DatasetManifest {
    pub fn from_records(records: Vec<ManifestRecord>) -> Result<Self, SignalError> {
        let mut seen = std::collections::BTreeSet::new();
        for r in &records {
            if !seen.insert(r.id.clone()) {
                return Err(SignalError::DuplicateId(r.id.clone()));
            }
        }
        let mut counts = BTreeMap::new();
        for r in &records {
            *counts.entry(format!("{}/{:?}", r.subset.letter(), r.label)).or_insert(0) += 1;
        }
        Ok(DatasetManifest { records, counts })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn label_count(&self, label: Label) -> usize {
        self.records.iter().filter(|r| r.label == label).count()
    }

    /// Manifest restricted to one sub-dataset.
    pub fn filter_subset(&self, subset: Subset) -> DatasetManifest {
        let records = self.records.iter().filter(|r| r.subset == subset).cloned().collect();
        DatasetManifest::from_records(records).expect("ids stay unique under filtering")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Parse a reference CSV of "id,label" rows with labels in {-1, 1}:
/// -1 maps to Normal, 1 to Abnormal.
pub fn load_reference(csv: &str) -> Result<BTreeMap<String, Label>, SignalError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in csv.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let id = parts.next().unwrap_or("").trim();
        let value = parts.next().map(str::trim);
        let extra = parts.next();
        let label = match (id.is_empty(), value, extra) {
            (false, Some("-1"), None) => Label::Normal,
            (false, Some("1"), None) => Label::Abnormal,
            _ => {
                return Err(SignalError::MalformedRow { line: lineno + 1, text: raw.to_string() });
            }
        };
        if map.insert(id.to_string(), label).is_some() {
            return Err(SignalError::DuplicateId(id.to_string()));
        }
    }
    Ok(map)
}

/// Scan a challenge-layout dataset directory: sub-directories `training-a`
/// through `training-f`, each holding WAV files and a `REFERENCE.csv`.
///
/// Files that fail to parse or decode to zero samples are skipped with a
/// logged warning. WAVs missing from the reference file are kept as
/// Unlabelled.
pub fn scan_dataset(root: &Path) -> Result<DatasetManifest, SignalError> {
    let mut records = Vec::new();
    let mut found_any_dir = false;
    for letter in ['a', 'b', 'c', 'd', 'e', 'f'] {
        let dir = root.join(format!("training-{letter}"));
        if !dir.is_dir() {
            continue;
        }
        found_any_dir = true;
        let subset = Subset::from_letter(letter).unwrap();

        let reference = {
            let ref_path = dir.join("REFERENCE.csv");
            match std::fs::read_to_string(&ref_path) {
                Ok(text) => load_reference(&text)?,
                Err(_) => {
                    log::warn!("no REFERENCE.csv in {}; records will be unlabelled", dir.display());
                    BTreeMap::new()
                }
            }
        };

        let mut wavs: Vec<PathBuf> = std::fs::read_dir(&dir)
            .map_err(|e| SignalError::DataMissing(format!("{}: {e}", dir.display())))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.extension().map(|e| e == "wav").unwrap_or(false))
            .collect();
        wavs.sort();

        for path in wavs {
            let id = path.file_stem().map(|s| s.to_string_lossy().to_string()).unwrap_or_default();
            let bytes = match std::fs::read(&path) {
                Ok(b) => b,
                Err(e) => {
                    log::warn!("skipping unreadable {}: {e}", path.display());
                    continue;
                }
            };
            match parse_wav(&bytes) {
                Ok(wav) if !wav.samples.is_empty() => {}
                Ok(_) => {
                    log::warn!("skipping zero-length {}", path.display());
                    continue;
                }
                Err(e) => {
                    log::warn!("skipping unparseable {}: {e}", path.display());
                    continue;
                }
            }
            let label = reference.get(&id).copied().unwrap_or(Label::Unlabelled);
            records.push(ManifestRecord { id, path, subset, label });
        }
    }
    if !found_any_dir {
        return Err(SignalError::DataMissing(format!(
            "{}: expected sub-directories training-a .. training-f",
            root.display()
        )));
    }
    DatasetManifest::from_records(records)
}
