use thiserror::Error;

/// Errors raised by the simulator, the samplers and the hash pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FqhError {
    #[error("basis index {index} out of range for {num_qubits} qubits")]
    InvalidBasisState { index: usize, num_qubits: usize },

    #[error("{num_qubits} qubits exceeds the limit of {limit}")]
    ResourceLimit { num_qubits: usize, limit: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("qubit {index} is out of range for {num_qubits} qubits")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("qubit {0} appears more than once among control and targets")]
    IndexClash(usize),

    #[error("matrix is not unitary (max |UU^+ - I| = {error:e})")]
    NotUnitary { error: f64 },

    #[error("probability distribution is invalid: {0}")]
    InvalidDistribution(String),

    #[error("shot count must be at least 1; use exact mode for zero shots")]
    InvalidShots,

    #[error("unitary dimension {0} is unsupported (expected one of 2, 4, 8, 16, 32)")]
    DimensionUnsupported(usize),

    #[error("message is empty")]
    EmptyMessage,

    #[error("message has odd length {0}; pad it before walking")]
    UnpaddedMessage(usize),

    #[error("invalid message syntax: {0}")]
    InputSyntax(String),

    #[error("invalid coin angles: {0}")]
    InvalidAngles(String),

    #[error("unitary dimension {dim} needs {needed} qubits but the position register has {n_pos}")]
    DimensionExceedsRegister { dim: usize, needed: usize, n_pos: usize },

    #[error("invalid hash parameters: {0}")]
    InvalidParams(String),

    #[error("ancilla register is not in |0...0> (P = {prob_zero:e})")]
    DirtyAncilla { prob_zero: f64 },

    #[error("sensitivity condition {condition} is inapplicable: {reason}")]
    ConditionInapplicable { condition: u8, reason: String },

    #[error("invalid analysis configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = FqhError> = std::result::Result<T, E>;
