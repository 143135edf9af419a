use fuchsian_enum::{Letter, Word};
use hyperbolic_core::Mobius;
use serde::{Deserialize, Serialize};

use crate::FamilyError;

/// One boundary of a pair of pants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BoundaryDatum {
    Cusp,
    Geodesic { length: f64 },
}

impl BoundaryDatum {
    pub fn length(&self) -> Option<f64> {
        match self {
            BoundaryDatum::Cusp => None,
            BoundaryDatum::Geodesic { length } => Some(*length),
        }
    }

    /// `|tr|` of the boundary class.
    pub fn trace(&self) -> f64 {
        match self {
            BoundaryDatum::Cusp => 2.0,
            BoundaryDatum::Geodesic { length } => 2.0 * (length / 2.0).cosh(),
        }
    }

    pub fn check(&self) -> Result<(), FamilyError> {
        match self {
            BoundaryDatum::Geodesic { length } if !(*length > 0.0) || !length.is_finite() => {
                Err(FamilyError::NonPositiveLength(*length))
            }
            _ => Ok(()),
        }
    }
}

/// Generators of a pants group in normal position. The boundary classes
/// are `X`, `Y` and `(XY)⁻¹`; the first boundary is `z ↦ λ²z` (axis the
/// imaginary axis, attracting at ∞) or `z ↦ z + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pants {
    pub x: Mobius,
    pub y: Mobius,
    pub data: [BoundaryDatum; 3],
}

impl Pants {
    pub fn boundary(&self) -> [Mobius; 3] {
        [self.x, self.y, self.x.compose(&self.y).inverse()]
    }

    /// Boundary words in the letters `X` (generator 0) and `Y` (generator 1).
    pub fn boundary_words() -> [Word; 3] {
        let x = Letter { gen: 0, inverse: false };
        let y = Letter { gen: 1, inverse: false };
        [Word(vec![x]), Word(vec![y]), Word(vec![y.inv(), x.inv()])]
    }

    /// `tr²X + tr²Y + tr²XY − trX·trY·trXY − tr[X,Y] − 2`, zero for any pair.
    pub fn fricke_defect(&self) -> f64 {
        let (tx, ty, txy) = (self.x.trace(), self.y.trace(), self.x.compose(&self.y).trace());
        let comm = self.x.compose(&self.y).compose(&self.x.inverse()).compose(&self.y.inverse());
        tx * tx + ty * ty + txy * txy - tx * ty * txy - comm.trace() - 2.0
    }
}

/// Solves the boundary-trace equations `tr X = x`, `tr Y = y`,
/// `tr XY = -z` with `x, y, z ≥ 2` in the normal position of the first
/// boundary.
pub fn build_pants(b0: BoundaryDatum, b1: BoundaryDatum, b2: BoundaryDatum) -> Result<Pants, FamilyError> {
    for b in [b0, b1, b2] {
        b.check()?;
    }
    let (ty, txy) = (b1.trace(), -b2.trace());
    let (x, y) = match b0 {
        BoundaryDatum::Cusp => {
            let c = txy - ty;
            let a = ty / 2.0;
            let b = (a * a - 1.0) / c;
            (Mobius::translation(1.0), Mobius::new(a, b, c, a))
        }
        BoundaryDatum::Geodesic { length } => {
            let lam = (length / 2.0).exp();
            let a = (txy - ty / lam) / (lam - 1.0 / lam);
            let d = ty - a;
            let k2 = 1.0 - a * d;
            if !(k2 > 0.0) {
                return Err(FamilyError::ConstructionFailure(format!("off-diagonal square {k2} is not positive")));
            }
            let k = k2.sqrt();
            (Mobius::diag(lam), Mobius::new(a, k, -k, d))
        }
    };
    let p = Pants { x, y, data: [b0, b1, b2] };
    let defect = p.fricke_defect();
    let scale = 1.0 + (ty * ty + txy * txy).abs();
    if !(defect.abs() <= 1e-9 * scale) {
        return Err(FamilyError::ConstructionFailure(format!("Fricke identity off by {defect}")));
    }
    Ok(p)
}
