use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("function is not in the class Psi: {0}")]
    NotInPsi(String),

    #[error("non-finite value {value} at node {index} (x = {x})")]
    NonFiniteSample { index: usize, x: f64, value: f64 },

    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("requested measure {requested} exceeds available measure {available}")]
    MeasureTooLarge { requested: f64, available: f64 },

    #[error("order {order} too large for resolution {resolution}")]
    OrderTooLarge { order: usize, resolution: usize },

    #[error("branch {branch}: negative discriminant at delta = {delta}")]
    BranchDomain { branch: &'static str, delta: f64 },

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
