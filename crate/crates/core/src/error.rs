use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid physical parameters: {0}")]
    InvalidParams(String),

    #[error("polynomial degree {degree} exceeds the supported maximum {max}")]
    DegreeOverflow { degree: u32, max: u32 },

    #[error("gaussian exponent is not integrable (real part of the quadratic form is not positive definite)")]
    NonIntegrable,

    #[error("heat operator has a singular width factor 1 + 4cB = {re} + {im}i")]
    SingularWidth { re: f64, im: f64 },

    #[error("star-exponential is singular at t = {re} + {im}i")]
    SingularTime { re: f64, im: f64 },

    #[error("star product needs at least one polynomial factor")]
    UnsupportedOperands,

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("symbol has weight {leak:e} beyond the truncation level {level}")]
    TruncationTail { level: usize, leak: f64 },

    #[error("gaussian frames differ; the sum is not representable in the class")]
    ExponentMismatch,

    #[error("state vector is in the wrong basis for this operation")]
    WrongBasis,

    #[error("invalid damping schedule: {0}")]
    InvalidSchedule(String),
}
