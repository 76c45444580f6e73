use thiserror::Error;

/// Errors reported by the library. Validation failures are distinguished from
/// internal consistency failures so callers can map them to exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("mode mismatch: operands mix exact and float scalars")]
    ModeMismatch,
    #[error("operation requires a nonzero vector")]
    ZeroVector,
    #[error("indices are 1-based; got 0")]
    InvalidIndex,
    #[error("invalid interval bounds [{lo}, {hi}]")]
    InvalidInterval { lo: u32, hi: u32 },
    #[error("interval family is overlapping or out of order")]
    InvalidFamily,
    #[error("omega interval applied to a plain vector")]
    OmegaInterval,
    #[error("bounding box {size} exceeds brute-force cap {cap}")]
    BruteForceCap { size: usize, cap: usize },
    #[error("family is not norming for the vector")]
    NotNorming,
    #[error("partition endpoints must lie in the support and cover it")]
    NotCanonical,
    #[error("partitions were validated against different vectors")]
    VectorMismatch,
    #[error("expected {expected} placement positions, got {got}")]
    PositionCount { expected: usize, got: usize },
    #[error("functional term has a zero coefficient")]
    ZeroCoefficient,
    #[error("a tail interval must be the last term")]
    TailNotLast,
    #[error("functional is not in the unit-ball interval form")]
    NotInD1,
    #[error("functional does not have norm one")]
    NotNormOne,
    #[error("a gap of exactly one position blocks the construction")]
    GapEqualsOne,
    #[error("float-mode input is not supported by this operation")]
    FloatModeUnsupported,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
