//! `ingest`: scan the dataset directory into a manifest and produce the
//! deterministic stratified split.

use std::path::{Path, PathBuf};

use cardioscope_core::signal::{scan_dataset, split_dataset, Subset};

use crate::errors::{CliError, CliResult};
use crate::meta::write_run_metadata;

pub const DOWNLOAD_HINT: &str = "expected <data>/training-a .. training-f with WAV files and \
REFERENCE.csv per directory; download the 2016 challenge training set from \
https://physionet.org/content/challenge-2016/ and unpack it there";

pub struct IngestArgs {
    pub data: PathBuf,
    pub out: PathBuf,
    pub subset: Option<char>,
    pub ratios: (f64, f64, f64),
    pub seed: u64,
}

pub fn run(args: &IngestArgs) -> CliResult {
    if !args.data.is_dir() {
        return Err(CliError::data(format!("{} is not a directory; {DOWNLOAD_HINT}", args.data.display())));
    }
    let mut manifest = scan_dataset(&args.data).map_err(|e| CliError::data(format!("{e}; {DOWNLOAD_HINT}")))?;
    if let Some(letter) = args.subset {
        let subset = Subset::from_letter(letter)
            .ok_or_else(|| CliError::config(format!("unknown subset {letter}")))?;
        manifest = manifest.filter_subset(subset);
    }
    if manifest.is_empty() {
        return Err(CliError::data(format!("no usable recordings found; {DOWNLOAD_HINT}")));
    }
    let split = split_dataset(&manifest, args.ratios, args.seed)?;

    write_run_metadata(
        &args.out,
        "ingest",
        serde_json::json!({
            "data": args.data.display().to_string(),
            "subset": args.subset.map(String::from).map(|s| s.to_string()),
            "ratios": [args.ratios.0, args.ratios.1, args.ratios.2],
            "seed": args.seed,
        }),
    )?;
    std::fs::write(args.out.join("manifest.json"), manifest.to_json())?;
    std::fs::write(args.out.join("split.json"), split.to_json())?;
    let (tr, va, te) = split.sizes();
    println!("ingest: {} records -> train {tr} / val {va} / test {te}", manifest.len());
    Ok(())
}

pub fn parse_ratios(text: &str) -> CliResult<(f64, f64, f64)> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::config(format!("cannot parse ratios {text:?}")))?;
    if parts.len() != 3 {
        return Err(CliError::config("ratios must be train,val,test"));
    }
    Ok((parts[0], parts[1], parts[2]))
}

pub fn default_data_dir(flag: &Option<PathBuf>) -> PathBuf {
    flag.clone()
        .or_else(|| std::env::var_os("CARDIOSCOPE_DATA_DIR").map(PathBuf::from))
        .unwrap_or_else(|| Path::new(".").join("data"))
}
