//! CLI error wrapper carrying a machine-readable kind.

use std::fmt;

#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError { kind: "config_invalid", message: message.into() }
    }

    pub fn data(message: impl Into<String>) -> Self {
        CliError { kind: "data_missing", message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError { kind: "io", message: e.to_string() }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError { kind: "io", message: e.to_string() }
    }
}

impl From<cardioscope_core::SignalError> for CliError {
    fn from(e: cardioscope_core::SignalError) -> Self {
        let kind = match &e {
            cardioscope_core::SignalError::DataMissing(_) => "data_missing",
            _ => "signal",
        };
        CliError { kind, message: e.to_string() }
    }
}

impl From<cardioscope_core::DspError> for CliError {
    fn from(e: cardioscope_core::DspError) -> Self {
        CliError { kind: "dsp", message: e.to_string() }
    }
}

impl From<cardioscope_core::BalanceError> for CliError {
    fn from(e: cardioscope_core::BalanceError) -> Self {
        CliError { kind: "balance", message: e.to_string() }
    }
}

impl From<cardioscope_core::MetricError> for CliError {
    fn from(e: cardioscope_core::MetricError) -> Self {
        CliError { kind: "metric", message: e.to_string() }
    }
}

impl From<cardioscope_models::ModelError> for CliError {
    fn from(e: cardioscope_models::ModelError) -> Self {
        CliError { kind: "model", message: e.to_string() }
    }
}

impl From<cardioscope_autodiff::AutodiffError> for CliError {
    fn from(e: cardioscope_autodiff::AutodiffError) -> Self {
        CliError { kind: "model", message: e.to_string() }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;
