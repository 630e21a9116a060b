use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("operator is not positive semidefinite (min eigenvalue {min_eig:e})")]
    NotPositive { min_eig: f64 },
    #[error("trace {trace} is not 1")]
    NotNormalized { trace: f64 },
    #[error("Kraus operators are not trace preserving (completeness residual {residual:e})")]
    NotTracePreserving { residual: f64 },
    #[error("function value is not finite at eigenvalue {eigenvalue:e}")]
    Domain { eigenvalue: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimensionOverflow { dim: usize, max: usize },
    #[error("{0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
