use thiserror::Error;

use crate::OrbitTable;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnumError {
    #[error("cusp at infinity is not normalized to width one")]
    NotNormalized,
    #[error("unknown generator label {0:?}")]
    UnknownLabel(String),
    #[error("group file line {0}: {1}")]
    Parse(usize, String),
    #[error("enumeration budget exhausted after {} records", partial.records.len())]
    BudgetExceeded { partial: Box<OrbitTable> },
    #[error("distinct bottom rows {a:?} and {b:?} share a key")]
    KeyCollision { a: (f64, f64), b: (f64, f64) },
    #[error("reduction to the Ford domain did not terminate")]
    ReductionDiverged,
    #[error("radius must be nonnegative, got {0}")]
    NegativeRadius(f64),
    #[error("t = {t} needs a table certified to {needed}, have {have}")]
    RadiusInsufficient { t: f64, needed: f64, have: f64 },
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(f64),
}
