use crate::{GeomError, Mobius};

/// Tolerance on `||tr| - 2|` below which an element counts as parabolic.
pub const PARABOLIC_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraceClass {
    Elliptic,
    Parabolic,
    Hyperbolic { length: f64 },
}

impl TraceClass {
    /// Translation length; zero for parabolic, `None` for elliptic.
    pub fn length(&self) -> Option<f64> {
        match self {
            TraceClass::Elliptic => None,
            TraceClass::Parabolic => Some(0.0),
            TraceClass::Hyperbolic { length } => Some(*length),
        }
    }
}

pub fn geodesic_length_of(m: &Mobius) -> Result<TraceClass, GeomError> {
    if m.is_identity(1e-12) {
        return Err(GeomError::IdentityElement);
    }
    let t = m.trace().abs();
    if (t - 2.0).abs() <= PARABOLIC_TOL {
        Ok(TraceClass::Parabolic)
    } else if t < 2.0 {
        Ok(TraceClass::Elliptic)
    } else {
        Ok(TraceClass::Hyperbolic { length: 2.0 * (t / 2.0).acosh() })
    }
}
