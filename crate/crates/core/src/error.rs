use thiserror::Error;

/// Errors raised by the norm-pair engines and solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operation requires a nonzero vector")]
    ZeroVector,

    #[error("radius {radius} outside the valid range [0, {max}]")]
    RadiusOutOfRange { radius: f64, max: f64 },

    #[error("bisection failed to bracket the target (norm pair violates monotonicity)")]
    BisectionBracket,

    #[error("unsupported sparseness tag: {0}")]
    UnsupportedTag(String),

    #[error("vector is not tight (sup gap {sup_gap:.3e} exceeds tolerance {tol:.3e})")]
    NotTight { sup_gap: f64, tol: f64 },

    #[error("breakpoint detection unstable: {0}")]
    BreakpointUnstable(String),

    #[error("iteration cap of {0} exceeded")]
    IterationCap(usize),

    #[error("problem size exceeds the supported cap ({got} > {cap})")]
    SizeCap { got: usize, cap: usize },

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("linear map is rank deficient (rank {rank} < {required})")]
    RankDeficient { rank: usize, required: usize },

    #[error("invalid signature sequence: {0}")]
    InvalidSignature(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
