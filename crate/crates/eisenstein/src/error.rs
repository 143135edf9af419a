use fuchsian_enum::EnumError;
use thiserror::Error;

use crate::SeriesValue;

#[derive(Debug, Error)]
pub enum EisError {
    #[error("Re s = {sigma} is outside the convergence region Re s > 1")]
    ConvergenceRegime { sigma: f64 },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("enumeration budget exceeded after {} cosets", partial.cosets_used)]
    BudgetExceeded { partial: Box<SeriesValue> },
    #[error("record at height {height} is not below the horocycle")]
    RegimeViolation { height: f64 },
    #[error("orbit table is not complete")]
    IncompleteTable,
    #[error("stencil step {step} does not fit below height {height}")]
    StencilOutOfRegion { step: f64, height: f64 },
    #[error("cannot parse spectral parameter {0:?}")]
    Parse(String),
    #[error(transparent)]
    Enumeration(#[from] EnumError),
}
