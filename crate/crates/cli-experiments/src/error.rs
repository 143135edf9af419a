use eisenstein::EisError;
use fuchsian_enum::EnumError;
use surface_families::FamilyError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Eisenstein(#[from] EisError),
    #[error(transparent)]
    Enumeration(#[from] EnumError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
}
