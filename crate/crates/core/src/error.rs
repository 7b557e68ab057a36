use thiserror::Error;

/// Errors returned by the simulation and estimation layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    IndexOutOfRange { index: usize, n_qubits: usize },

    #[error("matrix is not unitary (max |U†U - 1| = {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("internal consistency violation: {0}")]
    InternalConsistency(String),

    #[error("gate synthesis verification failed: {0}")]
    Synthesis(String),

    #[error("conjugation mismatch: U differs from W Z W† by {residual:.3e}")]
    ConjugationMismatch { residual: f64 },

    #[error("undefined overlap bound: spectral gap is zero")]
    UndefinedBound,

    #[error("degenerate problem: ground energy is non-negative")]
    DegenerateProblem,

    #[error("singular variance factor at p = {0}")]
    VarianceSingularity(f64),

    #[error("database parse error at line {line}: {reason}")]
    DbParse { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
