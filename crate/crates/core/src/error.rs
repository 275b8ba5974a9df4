use thiserror::Error;

/// Errors produced by state construction and transformation.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("mode count must be at least 1")]
    EmptyRegister,

    #[error("mode index {mode} out of range for {n_modes} modes")]
    ModeOutOfRange { mode: usize, n_modes: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("covariance matrix is not symmetric (max asymmetry {0:.3e})")]
    NotSymmetric(f64),

    #[error("matrix is not symplectic (residual {0:.3e})")]
    NotSymplectic(f64),

    #[error("matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),

    #[error("transmittance {0} outside [0, 1]")]
    InvalidTransmittance(f64),

    #[error("transmissivity {0} outside [0, 1]")]
    InvalidTransmissivity(f64),

    #[error("quadrature combination has no nonzero coefficient")]
    EmptyCombination,

    #[error("projected covariance is not positive semidefinite (eigenvalue {0:.3e})")]
    NotPositiveSemidefinite(f64),

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

impl CoreError {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        CoreError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
