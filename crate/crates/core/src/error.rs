use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain violation: {0}")]
    Domain(String),

    #[error("insufficient derivative data: need f^(0..={needed})(1), got {available} values")]
    InsufficientDerivatives { needed: usize, available: usize },

    #[error("unsupported Appell seed: {0}")]
    UnsupportedSeed(String),

    #[error("the pointwise value of f is not available (derivative data only)")]
    NonEvaluableF,

    #[error("quadrature did not converge after {levels} levels (last estimate {estimate}, error {error:e})")]
    QuadratureFailure {
        levels: u32,
        estimate: String,
        error: f64,
    },

    #[error("solvability condition violated at p = {p}, nu = {nu}")]
    SolvabilityViolated { p: usize, nu: usize },

    #[error("coefficients are not exact rationals; no symbolic zeta form exists")]
    Inexact,

    #[error("degenerate decay fit: {0}")]
    DegenerateFit(String),

    #[error("length mismatch: expected at least {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
