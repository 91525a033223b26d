use solverlab_core::SolverError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown case '{0}' (try `solverlab list-cases`)")]
    UnknownCase(String),
    #[error("option '{option}' does not apply to {model} cases")]
    ModelMismatch { option: &'static str, model: &'static str },
    #[error("scheme aborted at step {step}: {source}")]
    Aborted { step: usize, source: SolverError },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("case '{0}' has no reference solution")]
    NoReference(String),
    #[error("reference check failed: {0}")]
    BadReference(String),
    #[error("fields differ in length: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("order study needs at least 3 resolutions with positive errors")]
    TooFewPoints,
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
