use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text. `row` counts data rows from 1, header excluded.
    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("cannot decode {value} for attribute `{attribute}`")]
    Decode { attribute: String, value: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("no donor records available: {0}")]
    NoDonors(String),

    #[error("record `{0}` has no observed cells")]
    EmptyRecord(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("cannot classify: {0}")]
    Unlabeled(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("scoring error: {0}")]
    Scoring(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
