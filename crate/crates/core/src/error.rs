use thiserror::Error;

/// Errors produced by the library and the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("complexifier property violated: {0}")]
    PropertyViolation(String),

    #[error("inversion of the gradient map did not converge after {iterations} iterations (residual {residual:e})")]
    ConvergenceFailure { iterations: usize, residual: f64 },

    #[error("Hessian is singular at the requested point")]
    SingularHessian,

    #[error("positivity failure: minimum eigenvalue {0:e}")]
    PositivityFailure(f64),

    #[error("imaginary part of tau must be positive here, got {0}")]
    NotKahler(f64),

    #[error("quadrature did not converge: estimated relative error {err:e} exceeds {tol:e}")]
    QuadratureNotConverged { value: f64, err: f64, tol: f64 },

    #[error("norm table has no entry for irrep {rho} at tau2 = {tau2}")]
    MissingNorm { rho: String, tau2: f64 },

    #[error("section basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("malformed section: {0}")]
    MalformedSection(String),

    #[error("irrep {0} is not valid for this model")]
    UnknownIrrep(String),

    #[error("malformed norm table: {0}")]
    MalformedTable(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
