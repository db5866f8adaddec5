use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("degenerate simplex: vertices are affinely dependent")]
    Degenerate,
    #[error("polytope is not full-dimensional")]
    NotFullDimensional,
    #[error("point {0:?} lies outside the polytope")]
    OutsidePolytope(Vec<i64>),
    #[error("point {0:?} is already a vertex")]
    AlreadyVertex(Vec<i64>),
    #[error("polytope leaves the closed positive orthant")]
    NotInPositiveOrthant,
    #[error("missing height for vertex {0}")]
    MissingHeight(usize),
    #[error("sign distribution has {found} entries for {expected} vertices")]
    NonTotalSigns { expected: usize, found: usize },
    #[error("ambient {ambient} incompatible with polytope: {reason}")]
    IncompatibleAmbient { ambient: String, reason: String },
    #[error("origin is not generic: {0}")]
    NonGenericOrigin(String),
    #[error("no generic origin found after {0} attempts")]
    OriginSearchFailed(usize),
    #[error("face is not interior to the polytope")]
    FaceNotInterior,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("input is not a T2 triangulation (some vertex has an odd coordinate)")]
    NotT2,
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
