use fuchsian_enum::EnumError;
use hyperbolic_core::GeomError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("pants construction failed: {0}")]
    ConstructionFailure(String),
    #[error("gluing {gluing}: boundary lengths {a} and {b} differ")]
    LengthMismatch { gluing: usize, a: f64, b: f64 },
    #[error("boundary length {0} is not positive")]
    NonPositiveLength(f64),
    #[error("cusp normalization failed: {0}")]
    NormalizationFailure(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("anchor of {component} has displacement {displacement}, not in the thick part")]
    ThickPointValidationFailure { component: String, displacement: f64 },
    #[error("invalid family spec: {0}")]
    InvalidSpec(String),
    #[error("invalid basepoint: {0}")]
    InvalidBasepoint(String),
    #[error(transparent)]
    Enumeration(#[from] EnumError),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
