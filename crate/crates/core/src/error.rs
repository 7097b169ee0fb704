use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty matrix tuple")]
    EmptyTuple,
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("matrix {index} is not hermitian (relative deviation {deviation:.3e})")]
    NotHermitian { index: usize, deviation: f64 },
    #[error("matrix {index} is not square ({rows}x{cols})")]
    NotSquare { index: usize, rows: usize, cols: usize },
    #[error("could not resolve the centre spectrum after {retries} retries")]
    DegenerateCenter { retries: usize },
    #[error("could not sample a point of stratum {orbit_type} after {attempts} attempts")]
    SamplingFailure { orbit_type: String, attempts: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("ambient size {total} exceeds the brute-force bound {limit}")]
    TooLarge { total: usize, limit: usize },
    #[error("no generating tuple found within epsilon = {epsilon:e} after {attempts} attempts")]
    RepairFailed { epsilon: f64, attempts: usize },
    #[error("d = 1 requires locdim(X x X)")]
    MissingSquareDimension,
    #[error("dimension profile has no nonempty entry")]
    EmptyProfile,
    #[error("invalid dimension profile: {0}")]
    InvalidProfile(String),
    #[error("invalid orbit type: {0}")]
    InvalidOrbitType(String),
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
