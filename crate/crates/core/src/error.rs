use thiserror::Error;

/// Errors from WAV parsing and dataset assembly.
#[derive(Debug, Error, PartialEq)]
pub enum SignalError {
    #[error("malformed header: {0}")]
    MalformedHeader(String),

    #[error("unsupported encoding: {0}")]
    UnsupportedEncoding(String),

    #[error("malformed reference row {line}: {text:?}")]
    MalformedRow { line: usize, text: String },

    #[error("duplicate id {0:?} in reference file")]
    DuplicateId(String),

    #[error("class {0:?} has no members; cannot stratify")]
    EmptyClass(String),

    #[error("input of {len} samples exceeds target length {target}")]
    InputTooLong { len: usize, target: usize },

    #[error("input of {len} samples is shorter than target length {target}")]
    InputTooShort { len: usize, target: usize },

    #[error("ratios {0:?} do not sum to 1")]
    BadRatios([f64; 3]),

    #[error("dataset directory not found or empty: {0}")]
    DataMissing(String),
}

/// Errors from feature extraction.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum DspError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("empty signal")]
    EmptySignal,
}

/// Errors from balancing.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum BalanceError {
    #[error("minority class has {0} samples; need at least 2")]
    DegenerateMinority(usize),

    #[error("labels and features disagree in length")]
    LengthMismatch,
}

/// Errors from metric computation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricError {
    #[error("empty input")]
    EmptyInput,

    #[error("metric {0} undefined: denominator is zero")]
    UndefinedMetric(&'static str),

    #[error("scores contain only one class; AUROC undefined")]
    OneClassOnly,
}
