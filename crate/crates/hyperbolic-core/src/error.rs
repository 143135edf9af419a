use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("point {re} + {im}i is not in the upper half-plane")]
    NotInUpperHalfPlane { re: f64, im: f64 },
    #[error("normalized height {height} exceeds the base horocycle")]
    HeightAboveHorocycle { height: f64 },
    #[error("identity element has no trace class")]
    IdentityElement,
    #[error("length must be positive, got {0}")]
    NonPositiveLength(f64),
    #[error("collar fraction must lie in [0, 1], got {0}")]
    FractionOutOfRange(f64),
    #[error("matrix determinant {0} is not positive")]
    NonPositiveDeterminant(f64),
}
