use thiserror::Error;

/// Errors raised by the certificate engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} coefficients, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unknown base surface `{0}` (expected P2, F0, F1 or dP0..dP8)")]
    UnknownBase(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("not DRY-feasible: phi - (N/2) c1 is not ample")]
    NotDryFeasible,

    #[error("b must be positive, got {0}")]
    NonPositiveB(String),

    #[error("spectral data violates the (n, lambda) parity rules")]
    InadmissibleParity,

    #[error("invalid extension config: {0}")]
    InvalidConfig(String),

    #[error("polarization construction failed: {0}")]
    Polarization(String),

    #[error("omega_min needs 2*lambda = +1 or -1, got {0}")]
    LambdaNotHalf(i64),

    #[error("non-integral value where an integer is required: {0}")]
    NonIntegral(String),

    #[error("operation not defined on base {0}")]
    UnsupportedBase(String),

    #[error("(N = {rank}, B = {base}) is not covered by the construction")]
    Unsupported { rank: u32, base: String },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
