//! Length normalization applied before feature extraction and GAN input prep.

use crate::error::SignalError;

/// Zero-pad `samples` at the end to exactly `target_len`.
pub fn pad_to(samples: &[f64], target_len: usize) -> Result<Vec<f64>, SignalError> {
    if samples.len() > target_len {
        return Err(SignalError::InputTooLong { len: samples.len(), target: target_len });
    }
    let mut out = Vec::with_capacity(target_len);
    out.extend_from_slice(samples);
    out.resize(target_len, 0.0);
    Ok(out)
}

/// Truncate `samples` to the first `target_len` values.
pub fn prune_to(samples: &[f64], target_len: usize) -> Result<Vec<f64>, SignalError> {
    if samples.len() < target_len {
        return Err(SignalError::InputTooShort { len: samples.len(), target: target_len });
    }
    Ok(samples[..target_len].to_vec())
}

/// Block-mean decimation: output[i] is the mean of input[i*factor .. (i+1)*factor).
/// A trailing partial block is dropped.
pub fn decimate(samples: &[f64], factor: usize) -> Vec<f64> {
    assert!(factor >= 1, "decimation factor must be positive");
    if factor == 1 {
        return samples.to_vec();
    }
    samples
        .chunks_exact(factor)
        .map(|block| block.iter().sum::<f64>() / factor as f64)
        .collect()
}
