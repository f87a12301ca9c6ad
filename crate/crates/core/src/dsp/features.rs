//! Assembly of the 193-dimensional audio feature vector and its CSV format.
//!
//! Layout: [mfcc 40 | chroma 12 | mel 128 | contrast 7 | tonnetz 6], each
//! family computed on the raw signal and averaged across STFT frames.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::dsp::chroma::chroma;
use crate::dsp::contrast::spectral_contrast;
use crate::dsp::mel::{mel_filterbank, mel_spectrogram, MelFilterbank};
use crate::dsp::mfcc::mfcc_from_mel;
use crate::dsp::stft::{stft, StftParams};
use crate::dsp::tonnetz::tonnetz;
use crate::error::DspError;
use crate::signal::AudioRecord;

pub const MFCC_DIMS: usize = 40;
pub const CHROMA_DIMS: usize = 12;
pub const MEL_DIMS: usize = 128;
pub const CONTRAST_DIMS: usize = 7;
pub const TONNETZ_DIMS: usize = 6;
pub const FEATURE_DIMS: usize = MFCC_DIMS + CHROMA_DIMS + MEL_DIMS + CONTRAST_DIMS + TONNETZ_DIMS;

/// Fixed-layout 193-feature vector.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector193(pub Vec<f64>);

impl FeatureVector193 {
    pub fn new(values: Vec<f64>) -> Self {
        assert_eq!(values.len(), FEATURE_DIMS);
        FeatureVector193(values)
    }

    pub fn mfcc(&self) -> &[f64] {
        &self.0[..MFCC_DIMS]
    }

    pub fn chroma(&self) -> &[f64] {
        &self.0[MFCC_DIMS..MFCC_DIMS + CHROMA_DIMS]
    }

    pub fn mel(&self) -> &[f64] {
        &self.0[MFCC_DIMS + CHROMA_DIMS..MFCC_DIMS + CHROMA_DIMS + MEL_DIMS]
    }

    pub fn contrast(&self) -> &[f64] {
        let start = MFCC_DIMS + CHROMA_DIMS + MEL_DIMS;
        &self.0[start..start + CONTRAST_DIMS]
    }

    pub fn tonnetz(&self) -> &[f64] {
        &self.0[FEATURE_DIMS - TONNETZ_DIMS..]
    }
}

/// Filterbanks are pure functions of (sample rate, n_fft); build each once
/// and share the handle across parallel extraction.
fn cached_filterbank(sample_rate: u32, n_fft: usize) -> Result<Arc<MelFilterbank>, DspError> {
    static CACHE: OnceLock<Mutex<BTreeMap<(u32, usize), Arc<MelFilterbank>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    let mut guard = cache.lock().expect("filterbank cache poisoned");
    if let Some(bank) = guard.get(&(sample_rate, n_fft)) {
        return Ok(bank.clone());
    }
    let bank = Arc::new(mel_filterbank(MEL_DIMS, n_fft, sample_rate, 0.0, sample_rate as f64 / 2.0)?);
    guard.insert((sample_rate, n_fft), bank.clone());
    Ok(bank)
}

/// Extract the 193-feature vector from a recording: per-family matrices on
/// the raw (unpadded) signal, then the mean over frames of every row.
pub fn extract_feature_vector(record: &AudioRecord) -> Result<FeatureVector193, DspError> {
    if record.samples.is_empty() {
        return Err(DspError::EmptySignal);
    }
    let params = StftParams::default();
    let frames = stft(&record.samples, params)?;
    let bank = cached_filterbank(record.sample_rate, params.n_fft)?;

    let mel = mel_spectrogram(&frames, &bank);
    let mfcc = mfcc_from_mel(&mel, MFCC_DIMS);
    let chroma_mat = chroma(&frames, params.n_fft, record.sample_rate);
    let contrast = spectral_contrast(&frames, params.n_fft, record.sample_rate);
    let tonnetz_mat = tonnetz(&chroma_mat);

    let mut values = Vec::with_capacity(FEATURE_DIMS);
    values.extend(mfcc.row_means());
    values.extend(chroma_mat.row_means());
    values.extend(mel.row_means());
    values.extend(contrast.row_means());
    values.extend(tonnetz_mat.row_means());
    Ok(FeatureVector193::new(values))
}

/// One row of a feature CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub id: String,
    /// 0 = Normal, 1 = Abnormal, -1 = unlabelled.
    pub label: i8,
    pub features: Vec<f64>,
    /// Set for SMOTE-generated rows.
    pub synthetic: bool,
}

/// Serialize rows as "id,label,f000..f192" (plus a trailing `synthetic`
/// column when any row is synthetic). Values carry 13 significant digits.
pub fn write_feature_csv(rows: &[FeatureRow]) -> String {
    let with_synth = rows.iter().any(|r| r.synthetic);
    let mut out = String::from("id,label");
    for i in 0..FEATURE_DIMS {
        out.push_str(&format!(",f{i:03}"));
    }
    if with_synth {
        out.push_str(",synthetic");
    }
    out.push('\n');
    for row in rows {
        out.push_str(&row.id);
        out.push(',');
        out.push_str(&row.label.to_string());
        for v in &row.features {
            out.push_str(&format!(",{v:.12e}"));
        }
        if with_synth {
            out.push_str(if row.synthetic { ",1" } else { ",0" });
        }
        out.push('\n');
    }
    out
}

/// Parse the CSV format written by [`write_feature_csv`].
pub fn read_feature_csv(text: &str) -> Result<Vec<FeatureRow>, DspError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or(DspError::InvalidParams("empty feature file".into()))?;
    let cols: Vec<&str> = header.split(',').collect();
    let with_synth = cols.last() == Some(&"synthetic");
    let expected = 2 + FEATURE_DIMS + usize::from(with_synth);
    if cols.len() != expected {
        return Err(DspError::InvalidParams(format!(
            "feature header has {} columns, expected {expected}",
            cols.len()
        )));
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != expected {
            return Err(DspError::InvalidParams(format!("row {} has {} columns", lineno + 2, fields.len())));
        }
        let label: i8 = fields[1]
            .parse()
            .map_err(|_| DspError::InvalidParams(format!("bad label at row {}", lineno + 2)))?;
        let mut features = Vec::with_capacity(FEATURE_DIMS);
        for f in &fields[2..2 + FEATURE_DIMS] {
            features.push(
                f.parse::<f64>()
                    .map_err(|_| DspError::InvalidParams(format!("bad value at row {}", lineno + 2)))?,
            );
        }
        let synthetic = with_synth && fields[expected - 1] == "1";
        rows.push(FeatureRow { id: fields[0].to_string(), label, features, synthetic });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{Label, Subset};

    fn record(samples: Vec<f64>) -> AudioRecord {
        AudioRecord { id: "t1".into(), subset: Subset::E, sample_rate: 2000, samples, label: Label::Normal }
    }

    #[test]
    fn vector_has_fixed_layout() {
        let mut rng = cardioscope_rng::SplitMix64::new(6);
        let samples: Vec<f64> = (0..6000).map(|_| rng.normal() * 0.2).collect();
        let v = extract_feature_vector(&record(samples)).unwrap();
        assert_eq!(v.0.len(), 193);
        assert_eq!(v.mfcc().len(), 40);
        assert_eq!(v.chroma().len(), 12);
        assert_eq!(v.mel().len(), 128);
        assert_eq!(v.contrast().len(), 7);
        assert_eq!(v.tonnetz().len(), 6);
        assert!(v.mel().iter().all(|&m| m >= 0.0));
        assert!(v.chroma().iter().all(|&c| (0.0..=1.0).contains(&c)));
    }

    #[test]
    fn zero_signal_blocks() {
        let v = extract_feature_vector(&record(vec![0.0; 4096])).unwrap();
        assert!(v.mel().iter().all(|&m| m <= 1e-10));
        assert!(v.chroma().iter().all(|&c| c == 0.0));
        assert!(v.tonnetz().iter().all(|&t| t == 0.0));
    }

    #[test]
    fn single_frame_signal_equals_frame_features() {
        // 2048 samples yield exactly one frame; the mean over one frame is
        // that frame itself, so extraction is well-defined and finite.
        let mut rng = cardioscope_rng::SplitMix64::new(9);
        let samples: Vec<f64> = (0..2048).map(|_| rng.normal() * 0.5).collect();
        let v = extract_feature_vector(&record(samples)).unwrap();
        assert!(v.0.iter().all(|x| x.is_finite()));
    }

    #[test]
    fn determinism_and_pad_invariance_on_frame_aligned_input() {
        let mut rng = cardioscope_rng::SplitMix64::new(10);
        let samples: Vec<f64> = (0..4096).map(|_| rng.normal() * 0.4).collect();
        let a = extract_feature_vector(&record(samples.clone())).unwrap();
        let b = extract_feature_vector(&record(samples.clone())).unwrap();
        assert_eq!(a, b);

        // Padding by exactly one hop adds one frame over the zero tail; the
        // original frames are untouched, so trimming back recovers the vector.
        let mut padded = samples.clone();
        padded.extend(vec![0.0; 512]);
        let trimmed = extract_feature_vector(&record(padded[..4096].to_vec())).unwrap();
        for (x, y) in a.0.iter().zip(&trimmed.0) {
            assert!((x - y).abs() < 1e-6);
        }
    }

    #[test]
    fn csv_roundtrip_preserves_values() {
        let rows = vec![
            FeatureRow { id: "a1".into(), label: 1, features: (0..193).map(|i| i as f64 * 0.001).collect(), synthetic: false },
            FeatureRow { id: "s1".into(), label: 1, features: vec![0.5; 193], synthetic: true },
        ];
        let text = write_feature_csv(&rows);
        let back = read_feature_csv(&text).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0].id, "a1");
        assert!(back[1].synthetic);
        for (a, b) in rows[0].features.iter().zip(&back[0].features) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
