use thiserror::Error;

/// Errors across the crate. Validation failures (bad input data) are kept
/// distinct from internal consistency failures (a closed form disagreeing
/// with its oracle), because the CLI maps them to different exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite matrix entry at ({row},{col})")]
    NonFinite { row: usize, col: usize },

    #[error("tensor product dimension {dim} exceeds guard {guard}")]
    DimensionGuard { dim: usize, guard: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {value:.3e})")]
    NotPositive { value: f64 },

    #[error("trace must be 1, got {trace:.12}")]
    InvalidTrace { trace: f64 },

    #[error("invalid cycle: {0}")]
    InvalidCycle(String),

    #[error("matrix is not a 0/1 permutation matrix: {0}")]
    NotPermutation(String),

    #[error("permutation is reducible with orbit sizes {orbit_sizes:?}")]
    ReduciblePermutation { orbit_sizes: Vec<usize> },

    #[error(
        "matrix is not block circulant: entry ({row},{col}) = {got:.6e} \
         but the first row implies {expected:.6e}"
    )]
    NotCirculant {
        row: usize,
        col: usize,
        expected: f64,
        got: f64,
    },

    #[error("invalid weight table: {0}")]
    InvalidWeights(String),

    #[error("index {index:?} out of range for orders {orders:?}")]
    IndexOutOfRange { index: Vec<usize>, orders: Vec<usize> },

    #[error("state is not stationary for the generator (residual {residual:.3e})")]
    NonStationary { residual: f64 },

    #[error("invalid invariant-state parameters: {0}")]
    InvalidStateParams(String),

    #[error("weights are not a product table: {0}")]
    NotProductWeights(String),

    #[error("Kraus operator {index} is not a scaled permutation matrix")]
    NotCycleRepresentation { index: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("input schema error: {0}")]
    Schema(String),

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code the CLI uses for this error: 2 for validation problems,
    /// 3 for internal consistency failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InternalConsistency(_) => 3,
            _ => 2,
        }
    }
}
