use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty domain")]
    EmptyDomain,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("empty sample")]
    EmptySample,

    #[error("empty ball-mask intersection")]
    EmptyIntersection,

    #[error("cover gap at point {0}")]
    CoverGap(usize),

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("operation requires a Euclidean grid")]
    NotAGrid,

    #[error("oracle limited to convex range")]
    NonConvexRange,

    #[error("oracle size cap exceeded: {size} points > cap {cap}")]
    SizeCap { size: usize, cap: usize },

    #[error("convex solver failed: {0}")]
    Solver(String),

    #[error("supercritical; embedding check not applicable")]
    Supercritical,

    #[error("internal invariant breach: {0}")]
    Invariant(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
