//! `extract-features` and `balance`.

use std::path::PathBuf;

use cardioscope_core::balance::smote;
use cardioscope_core::dsp::{extract_feature_vector, write_feature_csv};
use cardioscope_core::signal::{parse_wav, AudioRecord, DatasetManifest};
use cardioscope_core::FeatureRow;
use rayon::prelude::*;

use crate::data::{load_feature_rows, load_split, partition_features};
use crate::errors::{CliError, CliResult};
use crate::meta::write_run_metadata;

pub struct ExtractArgs {
    pub manifest: PathBuf,
    pub out: PathBuf,
}

pub fn extract(args: &ExtractArgs) -> CliResult {
    let manifest_text = std::fs::read_to_string(&args.manifest)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", args.manifest.display())))?;
    let manifest = DatasetManifest::from_json(&manifest_text)
        .map_err(|e| CliError::config(format!("bad manifest: {e}")))?;

    let rows: Vec<FeatureRow> = manifest
        .records
        .par_iter()
        .map(|rec| -> CliResult<FeatureRow> {
            let bytes = std::fs::read(&rec.path)
                .map_err(|e| CliError::data(format!("cannot read {}: {e}", rec.path.display())))?;
            let wav = parse_wav(&bytes)?;
            let record = AudioRecord {
                id: rec.id.clone(),
                subset: rec.subset,
                sample_rate: wav.sample_rate,
                samples: wav.samples,
                label: rec.label,
            };
            let features = extract_feature_vector(&record)?;
            Ok(FeatureRow {
                id: rec.id.clone(),
                label: rec.label.to_code(),
                features: features.0,
                synthetic: false,
            })
        })
        .collect::<CliResult<_>>()?;

    write_run_metadata(
        &args.out,
        "extract-features",
        serde_json::json!({ "manifest": args.manifest.display().to_string(), "rows": rows.len() }),
    )?;
    std::fs::write(args.out.join("features.csv"), write_feature_csv(&rows))?;
    println!("extract-features: {} rows", rows.len());
    Ok(())
}

pub struct BalanceArgs {
    pub features: PathBuf,
    pub split: PathBuf,
    pub out: PathBuf,
    pub k: usize,
    pub seed: u64,
}

/// SMOTE is applied to the training split only; validation and test rows
/// pass through untouched in their own files.
pub fn balance(args: &BalanceArgs) -> CliResult {
    let rows = load_feature_rows(&args.features)?;
    let split = load_split(&args.split)?;
    let (train, _, _) = partition_features(&rows, &split)?;
    if train.is_empty() {
        return Err(CliError::data("training split has no labelled rows"));
    }

    let labels: Vec<i8> = train.labels.iter().map(|&b| i8::from(b)).collect();
    let balanced = smote(&train.rows, &labels, args.k, args.seed)?;

    let mut out_rows = Vec::with_capacity(balanced.features.len());
    for (i, features) in balanced.features.iter().enumerate() {
        let id = if balanced.synthetic_mask[i] {
            format!("synth{:05}", i - train.rows.len())
        } else {
            train.ids[i].clone()
        };
        out_rows.push(FeatureRow {
            id,
            label: balanced.labels[i],
            features: features.clone(),
            synthetic: balanced.synthetic_mask[i],
        });
    }

    write_run_metadata(
        &args.out,
        "balance",
        serde_json::json!({
            "features": args.features.display().to_string(),
            "split": args.split.display().to_string(),
            "k": args.k,
            "seed": args.seed,
        }),
    )?;
    std::fs::write(args.out.join("balanced_train.csv"), write_feature_csv(&out_rows))?;
    let synthetic = balanced.synthetic_mask.iter().filter(|&&s| s).count();
    println!("balance: {} rows ({} synthetic)", out_rows.len(), synthetic);
    Ok(())
}
