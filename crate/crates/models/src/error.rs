use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("solver did not converge within {passes} passes")]
    NoConvergence { passes: usize },

    #[error("model has not been trained")]
    UntrainedModel,

    #[error("non-finite value during {0}; training diverged")]
    NonFinite(&'static str),

    #[error("cannot reach contamination rate: need {needed} abnormal samples, have {available}")]
    InsufficientAbnormal { needed: usize, available: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Autodiff(#[from] cardioscope_autodiff::AutodiffError),

    #[error(transparent)]
    Metric(#[from] cardioscope_core::MetricError),
}
