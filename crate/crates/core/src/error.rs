use alloc::string::String;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },
    #[error("qubit index {index} out of range for {n} qubits")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("operator is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("gate touches {0} qubits, at most 3 allowed")]
    Arity(usize),
    #[error("{what} needs {requested} qubits, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        requested: usize,
        cap: usize,
    },
    #[error("out of regime: {0}")]
    OutOfRegime(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = core::result::Result<T, Error>;
