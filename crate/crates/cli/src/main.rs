//! Command-line workbench for reproducible heart-sound classification
//! experiments.

mod commands;
mod data;
mod errors;
mod meta;
mod presets;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{anomaly, dl, features, ingest, ml, selftest, ssl};
use errors::CliResult;

#[derive(Parser)]
#[command(name = "cardioscope", version, about = "Heart-sound classification workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan a dataset directory into a manifest and a stratified split.
    Ingest {
        /// Dataset root (defaults to $CARDIOSCOPE_DATA_DIR, then ./data).
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Restrict to one sub-dataset (a..f).
        #[arg(long)]
        subset: Option<char>,
        /// train,val,test fractions.
        #[arg(long, default_value = "0.72,0.08,0.20")]
        ratios: String,
        #[arg(long)]
        seed: u64,
    },
    /// Compute the 193-feature vector for every manifest record.
    ExtractFeatures {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// SMOTE-balance the training split of a feature file.
    Balance {
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        split: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Train a classical model from a named preset and evaluate on test.
    TrainMl {
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        split: PathBuf,
        /// One of: dt, dt-smote, svm, svm-smote, rf, rf-smote, gb, gb-smote.
        #[arg(long)]
        preset: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: u64,
    },
    /// Train a deep model (dense, cnn1d or autoencoder) on features.
    TrainDl {
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        split: PathBuf,
        #[arg(long)]
        model: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        epochs: usize,
        #[arg(long, default_value_t = 32)]
        batch: usize,
        #[arg(long, default_value_t = 1e-3)]
        lr: f64,
        #[arg(long, default_value_t = false)]
        smote: bool,
        /// Autoencoder only: train on Normal rows exclusively.
        #[arg(long, default_value_t = false)]
        normal_only: bool,
    },
    /// Semi-supervised GAN training on raw 5-second windows.
    TrainSsl {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        split: PathBuf,
        /// Size of the labelled subset drawn from the training split.
        #[arg(long)]
        labelled: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 400)]
        steps: usize,
        #[arg(long, default_value_t = 16)]
        batch: usize,
        #[arg(long, default_value_t = 2e-4)]
        lr: f64,
    },
    /// Run the anomaly-detection protocol grid.
    AnomalyGrid {
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        split: PathBuf,
        /// Autoencoder training mode: normal, entire or both.
        #[arg(long, default_value = "both")]
        ae: String,
        #[arg(long, default_value_t = 0.10)]
        contamination: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 30)]
        ae_epochs: usize,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Recompute a metrics report from a predictions file.
    Evaluate {
        #[arg(long)]
        predictions: PathBuf,
        #[arg(long, default_value = "model")]
        method: String,
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Labelled-count sweep comparing the supervised and SSL arms.
    Sweep {
        /// Use the self-contained synthetic signal task.
        #[arg(long, default_value_t = false)]
        synthetic: bool,
        /// Comma-separated labelled counts.
        #[arg(long, default_value = "4,8,16,32")]
        grid: String,
        /// Number of seeds (1..=N).
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 300)]
        steps: usize,
        #[arg(long, default_value_t = 16)]
        batch: usize,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value_t = 1540)]
        pool: usize,
        #[arg(long, default_value_t = 2000)]
        unlabelled: usize,
        #[arg(long, default_value_t = 500)]
        test: usize,
    },
    /// Run the built-in verification suites.
    Selftest,
}

fn dispatch(cli: Cli) -> (&'static str, CliResult) {
    match cli.command {
        Command::Ingest { data, out, subset, ratios, seed } => {
            let run = || {
                let ratios = ingest::parse_ratios(&ratios)?;
                let data = ingest::default_data_dir(&data);
                ingest::run(&ingest::IngestArgs { data, out, subset, ratios, seed })
            };
            ("ingest", run())
        }
        Command::ExtractFeatures { manifest, out } => {
            ("extract-features", features::extract(&features::ExtractArgs { manifest, out }))
        }
        Command::Balance { features: f, split, out, k, seed } => {
            ("balance", features::balance(&features::BalanceArgs { features: f, split, out, k, seed }))
        }
        Command::TrainMl { features, split, preset, out, seed } => {
            ("train-ml", ml::train_ml(&ml::TrainMlArgs { features, split, preset, out, seed }))
        }
        Command::TrainDl { features, split, model, out, seed, epochs, batch, lr, smote, normal_only } => (
            "train-dl",
            dl::train_dl(&dl::TrainDlArgs {
                features,
                split,
                model,
                out,
                seed,
                epochs,
                batch,
                lr,
                smote,
                normal_only,
            }),
        ),
        Command::TrainSsl { manifest, split, labelled, out, seed, steps, batch, lr } => (
            "train-ssl",
            ssl::train_ssl(&ssl::TrainSslArgs { manifest, split, labelled, out, seed, steps, batch, lr }),
        ),
        Command::AnomalyGrid { features, split, ae, contamination, out, seed, ae_epochs, jobs } => (
            "anomaly-grid",
            anomaly::anomaly_grid(&anomaly::AnomalyGridArgs {
                features,
                split,
                ae,
                contamination,
                out,
                seed,
                ae_epochs,
                jobs,
            }),
        ),
        Command::Evaluate { predictions, method, threshold, out } => (
            "evaluate",
            ml::evaluate(&ml::EvaluateArgs { predictions, method, threshold, out }),
        ),
        Command::Sweep { synthetic, grid, seeds, out, seed, steps, batch, jobs, pool, unlabelled, test } => {
            let run = || {
                let grid: Vec<usize> = grid
                    .split(',')
                    .map(|v| v.trim().parse::<usize>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| errors::CliError::config(format!("cannot parse grid {grid:?}")))?;
                ssl::sweep(&ssl::SweepArgs {
                    synthetic,
                    grid,
                    seeds,
                    out,
                    seed,
                    steps,
                    batch,
                    jobs,
                    pool,
                    unlabelled,
                    test,
                })
            };
            ("sweep", run())
        }
        Command::Selftest => ("selftest", selftest::selftest()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (name, result) = dispatch(cli);
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            meta::emit_error(name, e.kind, &e.message);
            ExitCode::FAILURE
        }
    }
}
