use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("{path}: row {row}, column `{column}`: {message}")]
    Schema {
        path: PathBuf,
        row: usize,
        column: String,
        message: String,
    },

    #[error("{path}: {message}")]
    Data { path: PathBuf, message: String },

    #[error("no usable observation for hour {hour} in the {window}-day window before day {day}")]
    NoUsableObservations { day: i64, hour: u32, window: u32 },

    #[error("cannot estimate from an empty sample")]
    EmptySample,

    #[error("gamma is undefined: direct loss {l_bn} does not exceed oracle loss {l_o}")]
    UndefinedGamma { l_bn: f64, l_o: f64 },

    #[error("series length mismatch: {0}")]
    Misaligned(String),

    #[error("insufficient history: {0}")]
    InsufficientHistory(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short machine-readable tag, used by the CLI for structured messages.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::InvalidDistribution(_) => "invalid-distribution",
            Error::Schema { .. } => "schema",
            Error::Data { .. } => "data",
            Error::NoUsableObservations { .. } => "no-usable-observations",
            Error::EmptySample => "empty-sample",
            Error::UndefinedGamma { .. } => "undefined-gamma",
            Error::Misaligned(_) => "misaligned",
            Error::InsufficientHistory(_) => "insufficient-history",
            Error::Config(_) => "config",
            Error::Io { .. } => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }
}

/// Checks `p ∈ [0, 1]`.
pub(crate) fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} = {p} is not in [0, 1]")))
    }
}
