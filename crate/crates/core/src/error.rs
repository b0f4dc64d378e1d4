use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("sphere dimension n = {0} is not supported (expected 2..=4)")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector cannot be normalized (norm {0})")]
    ZeroVector(f64),
    #[error("vector is not unit length (norm {norm}, tolerance {tolerance})")]
    NotUnit { norm: f64, tolerance: f64 },
    #[error("no representation given: need facet normals or generators")]
    MissingRepresentation,
    #[error("set is not contained in a closed hemisphere")]
    NotInHemisphere,
    #[error("set is empty")]
    Empty,
    #[error("set has empty interior")]
    NotABody,
    #[error("representations disagree: <u_{normal}, v_{generator}> = {value:e}")]
    InconsistentRepresentations {
        normal: usize,
        generator: usize,
        value: f64,
    },
    #[error("point is not strictly inside the projection hemisphere (<e, x> = {0:e})")]
    OutsideHemisphere(f64),
    #[error("antipodal normals give a lune with empty interior")]
    AntipodalNormals,
    #[error("covering hypothesis failed: {0} uncovered sample(s)")]
    NotACover(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;

impl GeometryError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        GeometryError::InvalidArgument(msg.into())
    }
}
