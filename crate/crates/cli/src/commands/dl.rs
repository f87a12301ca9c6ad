//! `train-dl`: the dense classifier, the 1D CNN classifier, and the
//! autoencoder, all on the 193-feature representation.

use std::path::PathBuf;

use cardioscope_core::eval::{auroc, confusion_metrics};
use cardioscope_core::Standardizer;
use cardioscope_models::deep::{
    build_autoencoder, build_cnn1d, build_dense_nn, predict_scores, train_autoencoder,
    train_supervised, write_history_csv, TrainConfig,
};

use crate::data::{load_feature_rows, load_split, partition_features, write_predictions_csv, REPORT_HEADER};
use crate::errors::{CliError, CliResult};
use crate::meta::write_run_metadata;

pub struct TrainDlArgs {
    pub features: PathBuf,
    pub split: PathBuf,
    pub model: String,
    pub out: PathBuf,
    pub seed: u64,
    pub epochs: usize,
    pub batch: usize,
    pub lr: f64,
    pub smote: bool,
    /// Autoencoder only: restrict training to Normal rows.
    pub normal_only: bool,
}

pub fn train_dl(args: &TrainDlArgs) -> CliResult {
    let rows = load_feature_rows(&args.features)?;
    let split = load_split(&args.split)?;
    let (train, val, test) = partition_features(&rows, &split)?;
    if train.is_empty() {
        return Err(CliError::data("training split has no labelled rows"));
    }

    let standardizer = Standardizer::fit(&train.rows);
    let cfg = TrainConfig { epochs: args.epochs, batch: args.batch, lr: args.lr, seed: args.seed };

    write_run_metadata(
        &args.out,
        "train-dl",
        serde_json::json!({
            "features": args.features.display().to_string(),
            "split": args.split.display().to_string(),
            "model": args.model,
            "seed": args.seed,
            "epochs": args.epochs,
            "batch": args.batch,
            "lr": args.lr,
            "smote": args.smote,
            "normal_only": args.normal_only,
        }),
    )?;
    std::fs::write(args.out.join("standardizer.json"), serde_json::to_string(&standardizer)?)?;

    match args.model.as_str() {
        "dense" | "cnn1d" => {
            let (mut x_train, mut y_train) = (standardizer.transform(&train.rows), train.labels.clone());
            if args.smote {
                let labels: Vec<i8> = y_train.iter().map(|&b| i8::from(b)).collect();
                let balanced = cardioscope_core::balance::smote(&x_train, &labels, 5, args.seed)?;
                y_train = balanced.labels.iter().map(|&l| l == 1).collect();
                x_train = balanced.features;
            }
            let x_val = standardizer.transform(&val.rows);
            let mut net = if args.model == "dense" {
                build_dense_nn(args.seed)
            } else {
                build_cnn1d(args.seed)
            };
            let history = train_supervised(&mut net, (&x_train, &y_train), (&x_val, &val.labels), &cfg)?;
            std::fs::write(args.out.join("history.csv"), write_history_csv(&history))?;
            net.save(&args.out.join("checkpoint.json"))?;

            if !test.is_empty() {
                let x_test = standardizer.transform(&test.rows);
                let scores = predict_scores(&mut net, &x_test);
                std::fs::write(
                    args.out.join("predictions.csv"),
                    write_predictions_csv(&test.ids, &test.labels, &scores),
                )?;
                let report = confusion_metrics(&scores, &test.labels, 0.5)?;
                let a = auroc(&scores, &test.labels)?;
                let mut report_csv = String::from(REPORT_HEADER);
                report_csv.push_str(&crate::data::report_csv_row(&args.model, &report));
                std::fs::write(args.out.join("report.csv"), report_csv)?;
                println!(
                    "train-dl {}: accuracy {:.3} macc {:.3} auroc {:.3}",
                    args.model, report.accuracy, report.macc, a
                );
            }
        }
        "autoencoder" => {
            let train_rows: Vec<Vec<f64>> = if args.normal_only {
                train
                    .rows
                    .iter()
                    .zip(&train.labels)
                    .filter(|(_, &abnormal)| !abnormal)
                    .map(|(r, _)| r.clone())
                    .collect()
            } else {
                train.rows.clone()
            };
            if train_rows.is_empty() {
                return Err(CliError::data("no rows left for autoencoder training"));
            }
            let x_train = standardizer.transform(&train_rows);
            let mut ae = build_autoencoder(args.seed);
            let losses = train_autoencoder(&mut ae, &x_train, &cfg)?;
            let mut history = String::from("epoch,train_loss\n");
            for (i, l) in losses.iter().enumerate() {
                history.push_str(&format!("{i},{l:.6}\n"));
            }
            std::fs::write(args.out.join("history.csv"), history)?;
            ae.net.save(&args.out.join("checkpoint.json"))?;
            println!(
                "train-dl autoencoder: {} rows, loss {:.5} -> {:.5}",
                x_train.len(),
                losses.first().unwrap_or(&f64::NAN),
                losses.last().unwrap_or(&f64::NAN)
            );
        }
        other => {
            return Err(CliError::config(format!(
                "unknown model {other:?}; expected dense, cnn1d or autoencoder"
            )));
        }
    }
    Ok(())
}
