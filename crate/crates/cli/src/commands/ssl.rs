//! `train-ssl` and `sweep`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use cardioscope_core::eval::sweep::{mean_curves, write_sweep_csv};
use cardioscope_core::eval::{auroc, render_line_plot, stratified_subsample};
use cardioscope_core::signal::{parse_wav, AudioRecord, DatasetManifest};
use cardioscope_models::experiment::{make_synthetic_task, synthetic_sweep, SyntheticSweepConfig};
use cardioscope_models::gan::{classify, prepare_gan_input, train_ssl_gan, GanArch, SslGanConfig};
use cardioscope_rng::SplitMix64;

use crate::data::load_split;
use crate::errors::{CliError, CliResult};
use crate::meta::write_run_metadata;

pub struct TrainSslArgs {
    pub manifest: PathBuf,
    pub split: PathBuf,
    pub labelled: usize,
    pub out: PathBuf,
    pub seed: u64,
    pub steps: usize,
    pub batch: usize,
    pub lr: f64,
}

/// Load GAN input windows for a list of record ids.
fn load_windows(
    manifest: &DatasetManifest,
    ids: &[String],
) -> CliResult<(Vec<Vec<f64>>, Vec<bool>)> {
    let by_id: BTreeMap<&str, &cardioscope_core::signal::ManifestRecord> =
        manifest.records.iter().map(|r| (r.id.as_str(), r)).collect();
    let mut signals = Vec::with_capacity(ids.len());
    let mut labels = Vec::with_capacity(ids.len());
    for id in ids {
        let rec = by_id
            .get(id.as_str())
            .ok_or_else(|| CliError::config(format!("split id {id} not in manifest")))?;
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
        signals.push(prepare_gan_input(&record)?);
        labels.push(rec.label == cardioscope_core::Label::Abnormal);
    }
    Ok((signals, labels))
}

/// Semi-supervised training on real recordings: a stratified labelled
/// subset of the training split, the remaining training signals as the
/// unlabelled pool, evaluated on the test split.
pub fn train_ssl(args: &TrainSslArgs) -> CliResult {
    let manifest_text = std::fs::read_to_string(&args.manifest)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", args.manifest.display())))?;
    let manifest = DatasetManifest::from_json(&manifest_text)
        .map_err(|e| CliError::config(format!("bad manifest: {e}")))?;
    let split = load_split(&args.split)?;

    let (train_signals, train_labels) = load_windows(&manifest, &split.train)?;
    let (test_signals, test_labels) = load_windows(&manifest, &split.test)?;
    if args.labelled > train_signals.len() {
        return Err(CliError::config(format!(
            "labelled count {} exceeds training split size {}",
            args.labelled,
            train_signals.len()
        )));
    }

    let mut rng = SplitMix64::derive(args.seed, args.labelled as u64);
    let lab_idx = stratified_subsample(&train_labels, args.labelled, &mut rng);
    let x_lab: Vec<Vec<f64>> = lab_idx.iter().map(|&i| train_signals[i].clone()).collect();
    let y_lab: Vec<bool> = lab_idx.iter().map(|&i| train_labels[i]).collect();
    // Unsupervised real pool: every training signal, labels дropped.
    let unlabelled = train_signals.clone();

    let arch = GanArch::full();
    let cfg = SslGanConfig {
        steps: args.steps,
        batch: args.batch,
        lr_d: args.lr,
        lr_g: args.lr,
        seed: args.seed,
        ablate_unsupervised: false,
    };
    let outcome = train_ssl_gan(&arch, (&x_lab, &y_lab), &unlabelled, &cfg)?;

    let mut d = outcome.discriminator;
    let scores = classify(&mut d, &test_signals);
    let test_auroc = auroc(&scores, &test_labels)?;

    write_run_metadata(
        &args.out,
        "train-ssl",
        serde_json::json!({
            "manifest": args.manifest.display().to_string(),
            "split": args.split.display().to_string(),
            "labelled": args.labelled,
            "steps": args.steps,
            "batch": args.batch,
            "lr": args.lr,
            "seed": args.seed,
        }),
    )?;
    d.save(&args.out.join("discriminator.json"))?;
    let mut history = String::from("step,supervised,unsup_real,unsup_fake,generator_fm\n");
    for (i, h) in outcome.history.iter().enumerate() {
        history.push_str(&format!(
            "{i},{:.6},{:.6},{:.6},{:.6}\n",
            h.supervised, h.unsup_real, h.unsup_fake, h.generator_fm
        ));
    }
    std::fs::write(args.out.join("history.csv"), history)?;
    std::fs::write(args.out.join("auroc.txt"), format!("{test_auroc:.6}\n"))?;
    println!("train-ssl: labelled {} -> test AUROC {:.4}", args.labelled, test_auroc);
    Ok(())
}

pub struct SweepArgs {
    pub synthetic: bool,
    pub grid: Vec<usize>,
    pub seeds: u64,
    pub out: PathBuf,
    pub seed: u64,
    pub steps: usize,
    pub batch: usize,
    pub jobs: Option<usize>,
    pub pool: usize,
    pub unlabelled: usize,
    pub test: usize,
}

/// Labelled-count sweep over both arms. Synthetic mode is self-contained;
/// dataset mode is not implemented through this command (use `train-ssl`
/// per labelled count instead).
pub fn sweep(args: &SweepArgs) -> CliResult {
    if !args.synthetic {
        return Err(CliError::config(
            "dataset-backed sweeps are driven by repeated train-ssl runs; pass --synthetic for the \
             self-contained experiment",
        ));
    }
    if args.grid.is_empty() || args.seeds == 0 {
        return Err(CliError::config("need a non-empty grid and at least one seed"));
    }
    let run = || -> CliResult<Vec<cardioscope_core::eval::SweepPoint>> {
        let task = make_synthetic_task(args.pool, args.unlabelled, args.test, args.seed);
        let cfg = SyntheticSweepConfig { steps: args.steps, batch: args.batch, lr: 2e-4 };
        let seeds: Vec<u64> = (1..=args.seeds).collect();
        Ok(synthetic_sweep(&task, &args.grid, &seeds, &cfg)?)
    };
    let points = match args.jobs {
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
        "sweep",
        serde_json::json!({
            "synthetic": true,
            "grid": args.grid,
            "seeds": args.seeds,
            "seed": args.seed,
            "steps": args.steps,
            "batch": args.batch,
            "pool": args.pool,
            "unlabelled": args.unlabelled,
            "test": args.test,
        }),
    )?;
    std::fs::write(args.out.join("sweep.csv"), write_sweep_csv(&points))?;
    std::fs::write(args.out.join("sweep.svg"), render_line_plot(&points)?)?;

    let curves = mean_curves(&points);
    for &count in &args.grid {
        let ssl = curves.get(&("ssl".to_string(), count)).copied().unwrap_or(f64::NAN);
        let sup = curves.get(&("supervised".to_string(), count)).copied().unwrap_or(f64::NAN);
        println!("sweep count {count}: ssl {ssl:.4} supervised {sup:.4} advantage {:+.4}", ssl - sup);
    }
    println!("sweep: {} rows", points.len());
    Ok(())
}
