//! SMOTE oversampling of the minority class in feature space.

use cardioscope_rng::SplitMix64;

use crate::error::BalanceError;

/// Output of balancing: original rows first, synthetic rows appended.
#[derive(Debug, Clone, PartialEq)]
pub struct BalancedSet {
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<i8>,
    /// True for generated rows.
    pub synthetic_mask: Vec<bool>,
}

impl BalancedSet {
    pub fn class_count(&self, label: i8) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Oversample the minority class until both classes have equal counts.
///
/// Synthetic points interpolate between a minority sample (visited
/// round-robin) and one of its k nearest minority neighbours chosen
/// uniformly: s = x + u * (x_nn - x), u ~ U(0, 1). Neighbour ties break
/// toward the lower index; k is capped at minority size - 1.
pub fn smote(
    features: &[Vec<f64>],
    labels: &[i8],
    k: usize,
    seed: u64,
) -> Result<BalancedSet, BalanceError> {
    if features.len() != labels.len() {
        return Err(BalanceError::LengthMismatch);
    }
    assert!(k >= 1, "k must be at least 1");

    let count_of = |label: i8| labels.iter().filter(|&&l| l == label).count();
    let (n0, n1) = (count_of(0), count_of(1));
    let (minority_label, majority_n, minority_n) = if n1 <= n0 { (1, n0, n1) } else { (0, n1, n0) };

    let mut out = BalancedSet {
        features: features.to_vec(),
        labels: labels.to_vec(),
        synthetic_mask: vec![false; labels.len()],
    };
    let need = majority_n - minority_n;
    if need == 0 {
        return Ok(out);
    }
    if minority_n < 2 {
        return Err(BalanceError::DegenerateMinority(minority_n));
    }

    let minority_idx: Vec<usize> =
        (0..labels.len()).filter(|&i| labels[i] == minority_label).collect();
    let k = k.min(minority_n - 1);

    // k nearest minority neighbours of every minority point, ties by index.
    let neighbours: Vec<Vec<usize>> = minority_idx
        .iter()
        .map(|&i| {
            let mut others: Vec<(f64, usize)> = minority_idx
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| (sq_dist(&features[i], &features[j]), j))
                .collect();
            others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            others.truncate(k);
            others.into_iter().map(|(_, j)| j).collect()
        })
        .collect();

    let mut rng = SplitMix64::new(seed);
    for s in 0..need {
        let slot = s % minority_idx.len();
        let base = minority_idx[slot];
        let nn = neighbours[slot][rng.below(k)];
        let u = rng.uniform();
        let point: Vec<f64> = features[base]
            .iter()
            .zip(&features[nn])
            .map(|(x, xn)| x + u * (xn - x))
            .collect();
        out.features.push(point);
        out.labels.push(minority_label);
        out.synthetic_mask.push(true);
    }
    Ok(out)
}
