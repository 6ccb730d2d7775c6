use thiserror::Error;

/// Failures raised by the calculus and the decomposition routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PwError {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (asymmetry {asymmetry:e} exceeds {tol:e})")]
    NotHermitian { asymmetry: f64, tol: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eig:e} below -{tol:e})")]
    NotPsd { min_eig: f64, tol: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("operator is not dominated by a multiple of A+B (round-trip residual {residual:e})")]
    NotDominated { residual: f64 },

    #[error("extended value: {function} is +inf on a spectral direction with weight; use a pairing or trace")]
    ExtendedValue { function: String },

    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, PwError>;
