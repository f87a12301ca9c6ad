//! Shared loading helpers: feature CSVs joined against split membership.

use std::collections::BTreeMap;
use std::path::Path;

use cardioscope_core::dsp::read_feature_csv;
use cardioscope_core::signal::SplitSpec;
use cardioscope_core::FeatureRow;

use crate::errors::{CliError, CliResult};

/// One split's labelled rows.
#[derive(Debug, Clone, Default)]
pub struct SplitRows {
    pub ids: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<bool>,
}

impl SplitRows {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

pub fn load_feature_rows(path: &Path) -> CliResult<Vec<FeatureRow>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
    Ok(read_feature_csv(&text)?)
}

pub fn load_split(path: &Path) -> CliResult<SplitSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
    SplitSpec::from_json(&text).map_err(|e| CliError::config(format!("bad split file: {e}")))
}

/// Join features against split ids, keeping labelled rows only (label 0/1).
/// Unknown split ids are an error; unlabelled rows are skipped.
pub fn partition_features(
    rows: &[FeatureRow],
    split: &SplitSpec,
) -> CliResult<(SplitRows, SplitRows, SplitRows)> {
    let by_id: BTreeMap<&str, &FeatureRow> = rows.iter().map(|r| (r.id.as_str(), r)).collect();
    let collect = |ids: &[String]| -> CliResult<SplitRows> {
        let mut out = SplitRows::default();
        for id in ids {
            let row = by_id
                .get(id.as_str())
                .ok_or_else(|| CliError::config(format!("split id {id} not in feature file")))?;
            let label = match row.label {
                0 => false,
                1 => true,
                _ => continue,
            };
            out.ids.push(id.clone());
            out.rows.push(row.features.clone());
            out.labels.push(label);
        }
        Ok(out)
    };
    Ok((collect(&split.train)?, collect(&split.val)?, collect(&split.test)?))
}

/// Predictions CSV: "id,truth,score".
pub fn write_predictions_csv(ids: &[String], truth: &[bool], scores: &[f64]) -> String {
    let mut out = String::from("id,truth,score\n");
    for ((id, &t), &s) in ids.iter().zip(truth).zip(scores) {
        out.push_str(&format!("{},{},{:.6}\n", id, u8::from(t), s));
    }
    out
}

pub fn read_predictions_csv(text: &str) -> CliResult<(Vec<String>, Vec<bool>, Vec<f64>)> {
    let mut ids = Vec::new();
    let mut truth = Vec::new();
    let mut scores = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 || line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(CliError::config(format!("predictions row {} malformed", i + 1)));
        }
        ids.push(fields[0].to_string());
        truth.push(fields[1] == "1");
        scores.push(
            fields[2]
                .parse()
                .map_err(|_| CliError::config(format!("bad score at row {}", i + 1)))?,
        );
    }
    Ok((ids, truth, scores))
}

/// Report CSV: "method,accuracy,specificity,sensitivity,macc".
pub fn report_csv_row(method: &str, r: &cardioscope_core::EvalReport) -> String {
    format!(
        "{},{:.6},{:.6},{:.6},{:.6}\n",
        method, r.accuracy, r.specificity, r.sensitivity, r.macc
    )
}

pub const REPORT_HEADER: &str = "method,accuracy,specificity,sensitivity,macc\n";
