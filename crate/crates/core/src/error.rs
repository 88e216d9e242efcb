use thiserror::Error;

/// Errors produced while building problems, lattices, trajectories and diagnostics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed problem: {0}")]
    MalformedProblem(String),

    #[error("unknown built-in problem `{0}` (expected one of: {1})")]
    UnknownProblem(String, String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("memory budget exceeded: {0}")]
    MemoryBudget(String),

    #[error("numerical blow-up at level {level}, index {index}: non-finite value")]
    NumericalBlowUp { level: usize, index: i64 },

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("invalid shift: {0}")]
    InvalidShift(String),

    #[error("insufficient samples for fit: {0}")]
    InsufficientSamples(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
