//! Evaluation: confusion metrics, AUROC, labelled-count sweeps, plotting.

pub mod auroc;
pub mod metrics;
pub mod plot;
pub mod sweep;

pub use auroc::auroc;
pub use metrics::{confusion_counts, confusion_metrics, macc, metrics_from_counts, ConfusionCounts, EvalReport};
pub use plot::render_line_plot;
pub use sweep::{
    mean_curves, read_sweep_csv, stratified_subsample, sweep_labelled_fraction, write_sweep_csv,
    ArmFn, SweepPoint,
};
