use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("matrix entry ({row}, {col}) has imaginary part {im:e}")]
    NonRealMatrix { row: usize, col: usize, im: f64 },

    #[error("state {index} is assigned to both `{first}` and `{second}`")]
    OverlappingSubspaces {
        index: usize,
        first: String,
        second: String,
    },

    #[error("state {0} is not covered by any outcome subspace")]
    IncompleteCover(usize),

    #[error("state index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("matrix is not unitary: {0}")]
    NotUnitary(String),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("invalid machine: {0}")]
    InvalidMachine(String),

    #[error("invalid state vector: {0}")]
    InvalidState(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{0} is not defined for this machine kind")]
    KindMismatch(&'static str),

    #[error("languages are over different alphabets")]
    AlphabetMismatch,

    #[error("languages have different horizons ({0} vs {1})")]
    HorizonMismatch(usize, usize),

    #[error("sweep covers no periods")]
    EmptySweep,
}
