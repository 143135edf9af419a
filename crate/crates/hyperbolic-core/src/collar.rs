use crate::GeomError;

/// Length at which `sinh(L/2) = 1`; the collar of width one is self-symmetric
/// there and every shorter geodesic has a collar wider than `asinh(1)`.
pub const SYMMETRIC_COLLAR_LENGTH: f64 = 1.762_747_174_039_086;

/// Core length of a collar and the fraction `k ∈ [0, 1]` of its full width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollarSpec {
    pub length: f64,
    pub k: f64,
}

impl CollarSpec {
    pub fn new(length: f64, k: f64) -> Self {
        Self { length, k }
    }
}

/// `k · asinh(1 / sinh(L/2))`.
pub fn collar_half_width(spec: CollarSpec) -> Result<f64, GeomError> {
    if !(spec.length > 0.0) {
        return Err(GeomError::NonPositiveLength(spec.length));
    }
    if !(0.0..=1.0).contains(&spec.k) {
        return Err(GeomError::FractionOutOfRange(spec.k));
    }
    if spec.k == 0.0 {
        return Ok(0.0);
    }
    Ok(spec.k * (1.0 / (spec.length / 2.0).sinh()).asinh())
}
