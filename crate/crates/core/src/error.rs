use thiserror::Error;

/// Errors raised by constructors and operations in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("dimension {0} must be even")]
    OddDimension(usize),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("noise strength must lie in [0, 1], got {0}")]
    InvalidNoiseStrength(f64),

    #[error("gaussian width must be positive and finite, got {0}")]
    InvalidWidth(f64),

    #[error("invalid line ({n1},{n2},{n3}) for N={dim}: {reason}")]
    InvalidLineSpec {
        n1: i64,
        n2: i64,
        n3: i64,
        dim: usize,
        reason: &'static str,
    },

    #[error("invalid dephasing coefficients: {0}")]
    InvalidCoefficients(String),

    #[error("sinkhorn balancing did not converge after {sweeps} sweeps (row error {residual:e})")]
    SinkhornNoConvergence { sweeps: usize, residual: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid state vector: {0}")]
    InvalidState(String),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("cat state centers coincide")]
    IdenticalCatCenters,

    #[error("invalid grover instance: {0}")]
    InvalidGrover(String),

    #[error("eigenvalue solver failed to converge")]
    EigenSolver,

    #[error("circuit has {0} qubits, above the simulation ceiling of 12")]
    CircuitTooLarge(usize),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("invalid rotation schedule: {0}")]
    InvalidSchedule(String),

    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },
}

impl Error {
    /// True for failures that come from the numerics rather than from bad
    /// input. The CLI maps these to a distinct exit code.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SinkhornNoConvergence { .. } | Error::EigenSolver | Error::NotUnitary(_)
        )
    }

    pub(crate) fn parse(what: &'static str, input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            what,
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
