//! Labelled-count sweep: train each arm on stratified subsamples of the
//! labelled pool and record test AUROC per (count, seed, arm).

use std::collections::BTreeMap;

use cardioscope_rng::SplitMix64;

use crate::error::MetricError;
use crate::eval::auroc::auroc;

/// One result row of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub labelled_count: usize,
    pub seed: u64,
    pub arm: String,
    pub auroc: f64,
}

/// A training arm: given the indices of the labelled subsample and a seed,
/// produce scores for the fixed test set.
pub type ArmFn<'a, D> = &'a (dyn Fn(&D, &[usize], u64) -> Vec<f64> + Sync);

/// Stratified subsample of `count` indices from a labelled pool.
/// Class quotas are proportional (largest-remainder rounding) and every
/// class keeps at least one member when count >= the class count allows.
pub fn stratified_subsample(labels: &[bool], count: usize, rng: &mut SplitMix64) -> Vec<usize> {
    assert!(count <= labels.len(), "subsample larger than pool");
    let pos: Vec<usize> = (0..labels.len()).filter(|&i| labels[i]).collect();
    let neg: Vec<usize> = (0..labels.len()).filter(|&i| !labels[i]).collect();
    let n = labels.len() as f64;

    let mut quota_pos = (count as f64 * pos.len() as f64 / n).round() as usize;
    quota_pos = quota_pos.min(pos.len()).min(count);
    let mut quota_neg = count - quota_pos;
    if quota_neg > neg.len() {
        quota_pos += quota_neg - neg.len();
        quota_neg = neg.len();
    }
    // Keep both classes represented whenever the budget allows.
    if count >= 2 && !pos.is_empty() && !neg.is_empty() {
        if quota_pos == 0 {
            quota_pos = 1;
            quota_neg -= 1;
        }
        if quota_neg == 0 {
            quota_neg = 1;
            quota_pos -= 1;
        }
    }

    let mut out = Vec::with_capacity(count);
    for (pool, quota) in [(pos, quota_pos), (neg, quota_neg)] {
        let mut ids = pool;
        rng.shuffle(&mut ids);
        out.extend_from_slice(&ids[..quota]);
    }
    out.sort_unstable();
    out
}

/// Run every (count, seed, arm) cell of the sweep. `train_labels` are the
/// labels of the full labelled pool; `test_truth` is the fixed test set's
/// ground truth that arm scores are evaluated against.
pub fn sweep_labelled_fraction<D>(
    data: &D,
    train_labels: &[bool],
    test_truth: &[bool],
    grid: &[usize],
    seeds: &[u64],
    arms: &[(&str, ArmFn<'_, D>)],
) -> Result<Vec<SweepPoint>, MetricError> {
    for &count in grid {
        if count > train_labels.len() {
            return Err(MetricError::EmptyInput);
        }
    }
    let mut points = Vec::new();
    for &count in grid {
        for &seed in seeds {
            let mut rng = SplitMix64::derive(seed, count as u64);
            let subsample = stratified_subsample(train_labels, count, &mut rng);
            for (name, arm) in arms {
                let scores = arm(data, &subsample, seed);
                let value = auroc(&scores, test_truth)?;
                points.push(SweepPoint {
                    labelled_count: count,
                    seed,
                    arm: name.to_string(),
                    auroc: value,
                });
            }
        }
    }
    points.sort_by(|a, b| {
        (a.labelled_count, a.seed, &a.arm).cmp(&(b.labelled_count, b.seed, &b.arm))
    });
    Ok(points)
}

/// Mean AUROC per (arm, count), for plotting and comparisons.
pub fn mean_curves(points: &[SweepPoint]) -> BTreeMap<(String, usize), f64> {
    let mut sums: BTreeMap<(String, usize), (f64, usize)> = BTreeMap::new();
    for p in points {
        let e = sums.entry((p.arm.clone(), p.labelled_count)).or_insert((0.0, 0));
        e.0 += p.auroc;
        e.1 += 1;
    }
    sums.into_iter().map(|(k, (s, n))| (k, s / n as f64)).collect()
}

/// Serialize sweep rows as "labelled_count,seed,arm,auroc".
pub fn write_sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from("labelled_count,seed,arm,auroc\n");
    for p in points {
        out.push_str(&format!("{},{},{},{:.6}\n", p.labelled_count, p.seed, p.arm, p.auroc));
    }
    out
}

/// Parse the CSV produced by [`write_sweep_csv`].
pub fn read_sweep_csv(text: &str) -> Result<Vec<SweepPoint>, MetricError> {
    let mut points = Vec::new();
    for line in text.lines().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(MetricError::EmptyInput);
        }
        points.push(SweepPoint {
            labelled_count: fields[0].parse().map_err(|_| MetricError::EmptyInput)?,
            seed: fields[1].parse().map_err(|_| MetricError::EmptyInput)?,
            arm: fields[2].to_string(),
            auroc: fields[3].parse().map_err(|_| MetricError::EmptyInput)?,
        });
    }
    Ok(points)
}
