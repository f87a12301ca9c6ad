//! `train-ml` and `evaluate`.

use std::path::PathBuf;

use cardioscope_core::balance::smote;
use cardioscope_core::eval::{auroc, confusion_metrics};

use crate::data::{
    load_feature_rows, load_split, partition_features, read_predictions_csv, write_predictions_csv,
    SplitRows, REPORT_HEADER,
};
use crate::errors::{CliError, CliResult};
use crate::meta::write_run_metadata;
use crate::presets::{preset, MlSpec, PRESET_NAMES};

pub struct TrainMlArgs {
    pub features: PathBuf,
    pub split: PathBuf,
    pub preset: String,
    pub out: PathBuf,
    pub seed: u64,
}

fn apply_smote(train: &SplitRows, seed: u64) -> CliResult<(Vec<Vec<f64>>, Vec<bool>)> {
    let labels: Vec<i8> = train.labels.iter().map(|&b| i8::from(b)).collect();
    let balanced = smote(&train.rows, &labels, 5, seed)?;
    let labels = balanced.labels.iter().map(|&l| l == 1).collect();
    Ok((balanced.features, labels))
}

pub fn train_ml(args: &TrainMlArgs) -> CliResult {
    let preset = preset(&args.preset).ok_or_else(|| {
        CliError::config(format!("unknown preset {:?}; available: {}", args.preset, PRESET_NAMES.join(", ")))
    })?;
    let rows = load_feature_rows(&args.features)?;
    let split = load_split(&args.split)?;
    let (train, _val, test) = partition_features(&rows, &split)?;
    if train.is_empty() || test.is_empty() {
        return Err(CliError::data("train or test split has no labelled rows"));
    }

    let (x_train, y_train) = if preset.smote {
        apply_smote(&train, args.seed)?
    } else {
        (train.rows.clone(), train.labels.clone())
    };

    let (scores, model_json): (Vec<f64>, String) = match &preset.spec {
        MlSpec::Tree(params) => {
            let model = cardioscope_models::fit_decision_tree(&x_train, &y_train, params)?;
            let scores = test.rows.iter().map(|r| model.predict_proba(r)).collect();
            (scores, serde_json::to_string(&model)?)
        }
        MlSpec::Forest(params) => {
            let params = cardioscope_models::ForestParams { seed: args.seed, ..params.clone() };
            let model = cardioscope_models::fit_random_forest(&x_train, &y_train, &params)?;
            let scores = test.rows.iter().map(|r| model.predict_proba(r)).collect();
            (scores, serde_json::to_string(&model)?)
        }
        MlSpec::Boosting(params) => {
            let model = cardioscope_models::fit_gradient_boosting(&x_train, &y_train, params)?;
            let scores = test.rows.iter().map(|r| model.predict_proba(r)).collect();
            (scores, serde_json::to_string(&model)?)
        }
        MlSpec::Svm(params) => {
            let model = cardioscope_models::smo_fit_svm(&x_train, &y_train, params)?;
            // Decision values, not probabilities; thresholded at 0.
            let scores = test.rows.iter().map(|r| model.decision_function(r)).collect();
            (scores, serde_json::to_string(&model)?)
        }
    };

    let threshold = if matches!(preset.spec, MlSpec::Svm(_)) { 0.0 } else { 0.5 };
    let report = confusion_metrics(&scores, &test.labels, threshold)?;
    let test_auroc = auroc(&scores, &test.labels)?;

    write_run_metadata(
        &args.out,
        "train-ml",
        serde_json::json!({
            "features": args.features.display().to_string(),
            "split": args.split.display().to_string(),
            "preset": preset.name,
            "smote": preset.smote,
            "seed": args.seed,
            "train_rows": x_train.len(),
            "test_rows": test.len(),
        }),
    )?;
    std::fs::write(args.out.join("model.json"), model_json)?;
    std::fs::write(
        args.out.join("predictions.csv"),
        write_predictions_csv(&test.ids, &test.labels, &scores),
    )?;
    let mut report_csv = String::from(REPORT_HEADER);
    report_csv.push_str(&crate::data::report_csv_row(preset.name, &report));
    std::fs::write(args.out.join("report.csv"), report_csv)?;

    println!(
        "train-ml {}: accuracy {:.3} specificity {:.3} sensitivity {:.3} macc {:.3} auroc {:.3}",
        preset.name, report.accuracy, report.specificity, report.sensitivity, report.macc, test_auroc
    );
    Ok(())
}

pub struct EvaluateArgs {
    pub predictions: PathBuf,
    pub method: String,
    pub threshold: f64,
    pub out: PathBuf,
}

/// Recompute the report (and AUROC when both classes appear) from a
/// predictions file.
pub fn evaluate(args: &EvaluateArgs) -> CliResult {
    let text = std::fs::read_to_string(&args.predictions)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", args.predictions.display())))?;
    let (_, truth, scores) = read_predictions_csv(&text)?;
    if truth.is_empty() {
        return Err(CliError::data("predictions file has no rows"));
    }
    let report = confusion_metrics(&scores, &truth, args.threshold)?;
    let auroc_value = auroc(&scores, &truth).ok();

    write_run_metadata(
        &args.out,
        "evaluate",
        serde_json::json!({
            "predictions": args.predictions.display().to_string(),
            "method": args.method,
            "threshold": args.threshold,
        }),
    )?;
    let mut report_csv = String::from(REPORT_HEADER);
    report_csv.push_str(&crate::data::report_csv_row(&args.method, &report));
    std::fs::write(args.out.join("report.csv"), report_csv)?;
    match auroc_value {
        Some(a) => println!(
            "evaluate {}: accuracy {:.3} specificity {:.3} sensitivity {:.3} macc {:.3} auroc {:.3}",
            args.method, report.accuracy, report.specificity, report.sensitivity, report.macc, a
        ),
        None => println!(
            "evaluate {}: accuracy {:.3} specificity {:.3} sensitivity {:.3} macc {:.3}",
            args.method, report.accuracy, report.specificity, report.sensitivity, report.macc
        ),
    }
    Ok(())
}
