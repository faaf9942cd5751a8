use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: String, actual: String },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid subsystem selection: {0}")]
    InvalidSubsystem(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid noise spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("invalid Bell index {0} (expected 1..=4)")]
    InvalidBellIndex(usize),

    #[error("invalid Pauli index {0} (expected 0..=3)")]
    InvalidPauliIndex(usize),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("outcome has vanishing weight {0:e}")]
    ZeroWeight(f64),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },
}

pub type Result<T> = std::result::Result<T, QError>;
