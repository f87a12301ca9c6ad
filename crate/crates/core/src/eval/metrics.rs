//! Confusion-matrix metrics. Abnormal is the positive class throughout.

use serde::{Deserialize, Serialize};

use crate::error::MetricError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }
}

/// Metrics for one (method, split) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub accuracy: f64,
    pub specificity: f64,
    pub sensitivity: f64,
    pub macc: f64,
    pub auroc: Option<f64>,
}

/// Mean of sensitivity and specificity.
pub fn macc(sensitivity: f64, specificity: f64) -> f64 {
    (sensitivity + specificity) / 2.0
}

/// Count the confusion matrix of thresholded scores against binary truth
/// (true = Abnormal = positive). Scores at or above the threshold predict
/// positive.
pub fn confusion_counts(scores: &[f64], truth: &[bool], threshold: f64) -> Result<ConfusionCounts, MetricError> {
    if scores.is_empty() {
        return Err(MetricError::EmptyInput);
    }
    assert_eq!(scores.len(), truth.len(), "scores and truth differ in length");
    let mut c = ConfusionCounts { tp: 0, fp: 0, tn: 0, fn_: 0 };
    for (&s, &t) in scores.iter().zip(truth) {
        let positive = s >= threshold;
        match (positive, t) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, false) => c.tn += 1,
            (false, true) => c.fn_ += 1,
        }
    }
    Ok(c)
}

/// Derive accuracy / sensitivity / specificity / MAcc from counts. A zero
/// denominator is flagged as an error rather than propagated as NaN.
pub fn metrics_from_counts(c: &ConfusionCounts) -> Result<EvalReport, MetricError> {
    let n = c.total();
    if n == 0 {
        return Err(MetricError::EmptyInput);
    }
    let pos = c.tp + c.fn_;
    let neg = c.tn + c.fp;
    if pos == 0 {
        return Err(MetricError::UndefinedMetric("sensitivity"));
    }
    if neg == 0 {
        return Err(MetricError::UndefinedMetric("specificity"));
    }
    let sensitivity = c.tp as f64 / pos as f64;
    let specificity = c.tn as f64 / neg as f64;
    Ok(EvalReport {
        accuracy: (c.tp + c.tn) as f64 / n as f64,
        specificity,
        sensitivity,
        macc: macc(sensitivity, specificity),
        auroc: None,
    })
}

/// Threshold scores and compute all confusion metrics in one step.
pub fn confusion_metrics(scores: &[f64], truth: &[bool], threshold: f64) -> Result<EvalReport, MetricError> {
    metrics_from_counts(&confusion_counts(scores, truth, threshold)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Published benchmark rows (accuracy, specificity, sensitivity, MAcc)
    /// used as test vectors for the MAcc identity.
    pub const REFERENCE_ROWS: [(f64, f64, f64, f64); 22] = [
        (0.869, 0.941, 0.604, 0.773),
        (0.878, 0.943, 0.640, 0.792),
        (0.860, 0.919, 0.640, 0.780),
        (0.847, 0.896, 0.669, 0.782),
        (0.850, 0.931, 0.554, 0.743),
        (0.867, 0.947, 0.576, 0.761),
        (0.796, 0.941, 0.266, 0.604),
        (0.826, 0.953, 0.360, 0.656),
        (0.869, 0.965, 0.518, 0.741),
        (0.818, 0.990, 0.187, 0.589),
        (0.909, 0.967, 0.698, 0.832),
        (0.855, 0.880, 0.763, 0.821),
        (0.748, 0.770, 0.670, 0.720),
        (0.843, 0.847, 0.827, 0.837),
        (0.824, 0.811, 0.870, 0.841),
        (0.832, 0.837, 0.813, 0.825),
        (0.807, 0.813, 0.784, 0.799),
        (0.827, 0.953, 0.367, 0.660),
        (0.898, 0.925, 0.798, 0.862),
        (0.878, 0.888, 0.842, 0.865),
        (0.913, 0.970, 0.705, 0.838),
        (0.913, 0.935, 0.834, 0.885),
    ];

    #[test]
    fn macc_identity_on_reference_rows() {
        for (i, &(_acc, spec, sens, printed_macc)) in REFERENCE_ROWS.iter().enumerate() {
            let m = macc(sens, spec);
            assert!(
                (m - printed_macc).abs() <= 0.0005 + 1e-9,
                "row {i}: computed {m}, printed {printed_macc}"
            );
        }
    }

    #[test]
    fn best_row_macc_value() {
        let m = macc(0.834, 0.935);
        assert!((m - 0.8845).abs() < 1e-12);
        assert!((m - 0.885).abs() <= 0.0005 + 1e-9);
    }

    #[test]
    fn perfect_predictions() {
        let scores = [0.9, 0.8, 0.1, 0.2];
        let truth = [true, true, false, false];
        let r = confusion_metrics(&scores, &truth, 0.5).unwrap();
        assert_eq!(r.accuracy, 1.0);
        assert_eq!(r.sensitivity, 1.0);
        assert_eq!(r.specificity, 1.0);
        assert_eq!(r.macc, 1.0);
    }

    #[test]
    fn all_positive_predictions_on_mixed_truth() {
        let scores = [0.9, 0.9, 0.9];
        let truth = [true, false, true];
        let r = confusion_metrics(&scores, &truth, 0.5).unwrap();
        assert_eq!(r.sensitivity, 1.0);
        assert_eq!(r.specificity, 0.0);
    }

    #[test]
    fn threshold_extremes() {
        let scores = [0.2, 0.4, 0.6, 0.8];
        let truth = [false, true, false, true];
        let low = confusion_metrics(&scores, &truth, 0.0).unwrap();
        assert_eq!((low.sensitivity, low.specificity), (1.0, 0.0));
        let high = confusion_metrics(&scores, &truth, 1.1).unwrap();
        assert_eq!((high.sensitivity, high.specificity), (0.0, 1.0));
    }

    #[test]
    fn degenerate_inputs_are_flagged() {
        assert_eq!(confusion_metrics(&[], &[], 0.5), Err(MetricError::EmptyInput));
        let one_class = confusion_metrics(&[0.1, 0.9], &[true, true], 0.5);
        assert_eq!(one_class, Err(MetricError::UndefinedMetric("specificity")));
    }
}
