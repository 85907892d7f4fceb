use thiserror::Error;

/// Errors raised by circuit construction and by every simulation engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid angle: {0}")]
    InvalidAngle(String),
    #[error("invalid outcome string: {0}")]
    InvalidOutcome(String),
    #[error("a circuit needs at least one qubit")]
    NoQubits,
    #[error("gate {gate} acts on no qubits")]
    EmptyGate { gate: usize },
    #[error("gate {gate} references qubit {qubit}, but the circuit has {n} qubits")]
    QubitOutOfRange { gate: usize, qubit: usize, n: usize },
    #[error("gate {gate} lists qubit {qubit} more than once")]
    DuplicateQubit { gate: usize, qubit: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{n} exceeds the exhaustive-evaluation cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
    #[error("R·c = m has no solution (m is outside the column space)")]
    NoSolution,
    #[error("circuit is not in the sparse (IFRB/IB) class")]
    NotSparse,
    #[error("gate {gate} acts on {size} qubits; the planar engine needs exactly two")]
    NotTwoBody { gate: usize, size: usize },
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("outcome has odd parity on a connected component; its probability is zero")]
    OddParity,
    #[error("measured set is not connected inside its component")]
    DisconnectedRegion,
    #[error("boundary vertices do not share a face; the mirror-glued graph is not planar")]
    MergeNotPlanar,
    #[error("error parameter {0} is outside [0, 1)")]
    InvalidEpsilon(f64),
    #[error("distributions have different domains ({0} vs {1})")]
    DomainMismatch(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;
