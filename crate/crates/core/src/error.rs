use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid exponent p = {0}; expected p >= 1")]
    InvalidExponent(f64),
    #[error("weight {index} is {value}; weights must be strictly positive")]
    NonPositiveWeight { index: usize, value: f64 },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("entry ({row}, {col}) is negative ({value})")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("coordinate {index} is negative ({value})")]
    NegativeCoordinate { index: usize, value: f64 },
    #[error("operator norm {norm} exceeds 1 + {tol}")]
    NotContraction { norm: f64, tol: f64 },
    #[error("depth K must be at least 1")]
    InvalidDepth,
    #[error("support reaches copy Z_{0}, the last copy of the truncated dilation")]
    TruncationOverflow(usize),
    #[error("generator is invalid: {0}")]
    InvalidGenerator(String),
    #[error("symbol is not finite at spectral point {0}")]
    SymbolUndefined(f64),
    #[error("kernel is not causal")]
    NonCausalKernel,
    #[error("angle {psi} is not below the cone angle {theta}")]
    AngleOutOfRange { psi: f64, theta: f64 },
    #[error("grid is too coarse for central differences (adjacent ratio {0})")]
    UnstableGrid(f64),
    #[error("gamma function pole at {0}")]
    GammaPole(f64),
    #[error("quadrature tail bound {bound:e} exceeds {limit:e}; increase the cut-off")]
    TailBoundExceeded { bound: f64, limit: f64 },
    #[error("iteration did not converge after {0} steps")]
    NonConvergence(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("malformed input: {0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the command-line runner: 3 for rejected
    /// inputs, 4 for numerical non-convergence and 5 for other numerical
    /// failures. Failed checks (code 2) are not errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonConvergence(_) => 4,
            Error::TruncationOverflow(_) | Error::SymbolUndefined(_) => 5,
            _ => 3,
        }
    }
}
