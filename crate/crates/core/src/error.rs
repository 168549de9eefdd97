use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("absolute continuity violated: {0}")]
    AbsoluteContinuityViolation(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("empty support")]
    EmptySupport,

    #[error("unknown label {0:?}")]
    UnknownLabel(String),

    #[error("enumeration budget exceeded: {atoms} atoms > limit {limit}")]
    BudgetExceeded { atoms: u128, limit: u64 },

    #[error("unknown bound id {0:?}")]
    UnknownBound(String),

    #[error("invalid problem definition: {0}")]
    InvalidProblem(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "delta",
            value: delta,
            reason: "confidence parameter must lie in (0, 1)",
        })
    }
}
