//! `anomaly-grid`: the 2x2x2 protocol grid per autoencoder-training mode.

use std::path::PathBuf;

use cardioscope_models::anomaly::{
    run_protocol_grid, write_protocol_csv, AeTraining, LabelledFeatures, ProtocolRunConfig,
};
use rayon::prelude::*;

use crate::data::{load_feature_rows, load_split, partition_features};
use crate::errors::{CliError, CliResult};
use crate::meta::write_run_metadata;

pub struct AnomalyGridArgs {
    pub features: PathBuf,
    pub split: PathBuf,
    pub ae: String,
    pub contamination: f64,
    pub out: PathBuf,
    pub seed: u64,
    pub ae_epochs: usize,
    pub jobs: Option<usize>,
}

pub fn anomaly_grid(args: &AnomalyGridArgs) -> CliResult {
    let rows = load_feature_rows(&args.features)?;
    let split = load_split(&args.split)?;
    let (train, _, test) = partition_features(&rows, &split)?;
    if train.is_empty() || test.is_empty() {
        return Err(CliError::data("train or test split has no labelled rows"));
    }
    let train_set = LabelledFeatures::new(train.rows, train.labels);
    let test_set = LabelledFeatures::new(test.rows, test.labels);

    let modes: Vec<AeTraining> = match args.ae.as_str() {
        "normal" => vec![AeTraining::NormalOnly],
        "entire" => vec![AeTraining::EntireData],
        "both" => vec![AeTraining::NormalOnly, AeTraining::EntireData],
        other => return Err(CliError::config(format!("unknown --ae mode {other:?}; expected normal, entire or both"))),
    };
    let run_cfg = ProtocolRunConfig { ae_epochs: args.ae_epochs, ..Default::default() };

    let run = || -> CliResult<Vec<(AeTraining, String)>> {
        modes
            .par_iter()
            .map(|&mode| {
                let rows = run_protocol_grid(&train_set, &test_set, mode, args.contamination, args.seed, &run_cfg)?;
                Ok((mode, write_protocol_csv(&rows)))
            })
            .collect()
    };
    let outputs = match args.jobs {
        Some(jobs) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|e| CliError::config(e.to_string()))?;
            pool.install(run)?
        }
        None => run()?,
    };

    write_run_metadata(
        &args.out,
        "anomaly-grid",
        serde_json::json!({
            "features": args.features.display().to_string(),
            "split": args.split.display().to_string(),
            "ae": args.ae,
            "contamination": args.contamination,
            "seed": args.seed,
            "ae_epochs": args.ae_epochs,
        }),
    )?;
    for (mode, csv) in outputs {
        let name = match mode {
            AeTraining::NormalOnly => "anomaly_ae-normal.csv",
            AeTraining::EntireData => "anomaly_ae-entire.csv",
        };
        std::fs::write(args.out.join(name), &csv)?;
        println!("anomaly-grid [{name}]:");
        print!("{csv}");
    }
    Ok(())
}
