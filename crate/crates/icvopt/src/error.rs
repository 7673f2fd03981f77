//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {0} outside supported range 1..=24")]
    QubitCount(usize),

    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitIndex { index: usize, n_qubits: usize },

    #[error("qubit indices must be distinct, got {0} twice")]
    DuplicateQubit(usize),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("problem has no feasible state")]
    NoFeasibleState,

    #[error("state carries no probability mass on feasible states")]
    EmptyFeasibleSupport,

    #[error("degenerate instance: all feasible states share one objective value")]
    DegenerateInstance,

    #[error("objective returned a non-finite value at {params:?}")]
    NonFiniteObjective { params: Vec<f64> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
