use thiserror::Error;

/// Errors raised by the numerical kernel, state construction, measurement
/// models and experiment drivers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("matrix is not Hermitian: ||m - m†||_HS = {deviation:e} exceeds {tol:e}")]
    Hermiticity { deviation: f64, tol: f64 },
    #[error("operator is not positive semidefinite: eigenvalue {eigenvalue:e} below -{tol:e}")]
    NotPsd { eigenvalue: f64, tol: f64 },
    #[error("trace {trace} differs from 1 by more than {tol:e}")]
    Trace { trace: f64, tol: f64 },
    #[error("vector norm {norm} differs from 1 by more than {tol:e}")]
    Normalization { norm: f64, tol: f64 },
    #[error("orthonormality violated: {0}")]
    Orthonormality(String),
    #[error("rank error: {0}")]
    Rank(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, LabError>;
