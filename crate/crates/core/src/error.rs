use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: expected {expected}, got {found}")]
    Shape { expected: String, found: String },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("mode count must be at least 1")]
    ZeroModes,

    #[error("mode index {index} out of range 1..={modes}")]
    ModeIndex { index: usize, modes: usize },

    #[error("{kind} term couples mode {mode} to itself")]
    SameMode { kind: &'static str, mode: usize },

    #[error("coefficient of {0} term is not finite")]
    NonFiniteCoefficient(&'static str),

    #[error("matrix is not symmetric (asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("{what} is not positive definite: smallest eigenvalue {eigenvalue:e}")]
    NotPositiveDefinite { what: String, eigenvalue: f64 },

    #[error("Williamson reconstruction residual {residual:e} exceeds tolerance {tol:e}")]
    Residual { residual: f64, tol: f64 },

    #[error("matrix is not symplectic (defect {defect:e})")]
    NotSymplectic { defect: f64 },

    #[error("invalid schedule: {0}")]
    Schedule(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("eigendecomposition failed to converge")]
    Eigen,
}

pub type Result<T> = std::result::Result<T, Error>;
