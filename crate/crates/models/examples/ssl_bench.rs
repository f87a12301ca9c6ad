//! Tuning bench for the desk-scale SSL experiment (not part of the suite).

use cardioscope_core::eval::sweep::mean_curves;
use cardioscope_models::experiment::*;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let steps: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(300);
    let n_seeds: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(2);
    let grid: Vec<usize> = args
        .get(3)
        .map(|s| s.split(',').map(|v| v.parse().unwrap()).collect())
        .unwrap_or_else(|| vec![4, 8]);

    let t0 = Instant::now();
    let task = make_synthetic_task(1540, 2000, 500, 12345);
    println!("task built in {:.1?}", t0.elapsed());

    let cfg = SyntheticSweepConfig { steps, batch: 16, lr: 2e-4 };
    let seeds: Vec<u64> = (1..=n_seeds).collect();
    let t1 = Instant::now();
    let points = synthetic_sweep(&task, &grid, &seeds, &cfg).unwrap();
    println!("sweep ({} cells) in {:.1?}", points.len(), t1.elapsed());

    let curves = mean_curves(&points);
    for &count in &grid {
        let ssl = curves[&("ssl".to_string(), count)];
        let sup = curves[&("supervised".to_string(), count)];
        println!("count {count:4}: ssl {ssl:.4}  supervised {sup:.4}  advantage {:+.4}", ssl - sup);
    }
}
