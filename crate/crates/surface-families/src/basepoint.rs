use std::fmt;
use std::str::FromStr;

use fuchsian_enum::min_displacement;
use hyperbolic_core::{collar_half_width, point_at_axis_distance, CollarSpec, UpperHalfPoint, SYMMETRIC_COLLAR_LENGTH};
use serde::{Deserialize, Serialize};

use crate::{FamilyError, FamilyInstance, Locator};

/// Search radius for the thick-part displacement check.
const THICK_SEARCH_RADIUS: f64 = 2.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "at", rename_all = "snake_case")]
pub enum BasepointSpec {
    /// On `∂N_γ(k)` on the side of the named component.
    CollarBoundary { curve: String, k: f64, side: String },
    /// The anchor of a component.
    ThickPoint { component: String },
    /// On the horocycle `Im = a` of the cusp in its width-one chart, at
    /// the given horizontal offset.
    CuspBoundary {
        label: String,
        a: f64,
        #[serde(default)]
        offset: f64,
    },
}

impl BasepointSpec {
    pub fn collar(curve: &str, k: f64, side: &str) -> Self {
        Self::CollarBoundary { curve: curve.into(), k, side: side.into() }
    }

    pub fn thick(component: &str) -> Self {
        Self::ThickPoint { component: component.into() }
    }

    pub fn cusp(label: &str, a: f64) -> Self {
        Self::CuspBoundary { label: label.into(), a, offset: 0.0 }
    }

    pub fn k(&self) -> Option<f64> {
        match self {
            Self::CollarBoundary { k, .. } => Some(*k),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        match self {
            Self::CollarBoundary { k, .. } if !(0.0..=1.0).contains(k) => {
                Err(FamilyError::InvalidBasepoint(format!("collar fraction {k} outside [0, 1]")))
            }
            Self::CuspBoundary { a, .. } if !(*a >= 1.0) => {
                Err(FamilyError::InvalidBasepoint(format!("horocycle height {a} below 1")))
            }
            _ => Ok(()),
        }
    }
}

/// `collar:gamma1:0.5:S2`, `thick:S2`, `cusp:E:2[:offset]`.
impl fmt::Display for BasepointSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::CollarBoundary { curve, k, side } => write!(f, "collar:{curve}:{k}:{side}"),
            Self::ThickPoint { component } => write!(f, "thick:{component}"),
            Self::CuspBoundary { label, a, offset } if *offset == 0.0 => {
                write!(f, "cusp:{label}:{a}")
            }
            Self::CuspBoundary { label, a, offset } => write!(f, "cusp:{label}:{a}:{offset}"),
        }
    }
}

impl FromStr for BasepointSpec {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, FamilyError> {
        let bad = || FamilyError::InvalidBasepoint(s.to_string());
        let num = |t: &str| t.parse::<f64>().map_err(|_| bad());
        let parts: Vec<&str> = s.trim().split(':').collect();
        let spec = match parts.as_slice() {
            ["collar", curve, k, side] => Self::collar(curve, num(k)?, side),
            ["thick", c] => Self::thick(c),
            ["cusp", label, a] => Self::cusp(label, num(a)?),
            ["cusp", label, a, off] => Self::CuspBoundary { label: label.to_string(), a: num(a)?, offset: num(off)? },
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Position of `z` in the normal form of a pinching curve, where the
/// curve is the imaginary axis.
pub fn collar_coordinates(
    inst: &FamilyInstance,
    curve: &str,
    z: UpperHalfPoint,
) -> Result<UpperHalfPoint, FamilyError> {
    match inst.component_of.get(curve) {
        Some(Locator::Collar { inner, .. }) => Ok(inst.frames[*inner].point_to_local(z)),
        _ => Err(FamilyError::UnknownLabel(curve.into())),
    }
}

pub fn basepoint(inst: &FamilyInstance, spec: &BasepointSpec) -> Result<UpperHalfPoint, FamilyError> {
    spec.validate()?;
    match spec {
        BasepointSpec::CollarBoundary { curve, k, side } => {
            let Some(Locator::Collar { inner, outer, length }) = inst.component_of.get(curve) else {
                return Err(FamilyError::UnknownLabel(curve.clone()));
            };
            let frame = inst.frames[*inner];
            let sign = match inst.component_pants(side)? {
                p if p == *inner => frame.body_sign,
                p if p == *outer => -frame.body_sign,
                _ => return Err(FamilyError::InvalidBasepoint(format!("{side} does not border {curve}"))),
            };
            let w = collar_half_width(CollarSpec::new(*length, *k))?;
            Ok(frame.point_to_global(point_at_axis_distance(w, sign)))
        }
        BasepointSpec::ThickPoint { component } => {
            let Some(Locator::Component { anchor, .. }) = inst.component_of.get(component) else {
                return Err(FamilyError::UnknownLabel(component.clone()));
            };
            let z = anchor.ok_or_else(|| FamilyError::ThickPointValidationFailure {
                component: component.clone(),
                displacement: f64::NAN,
            })?;
            let d = min_displacement(&inst.group, z, THICK_SEARCH_RADIUS)?;
            if !(d > SYMMETRIC_COLLAR_LENGTH) {
                return Err(FamilyError::ThickPointValidationFailure { component: component.clone(), displacement: d });
            }
            Ok(z)
        }
        BasepointSpec::CuspBoundary { label, a, offset } => {
            let Some(Locator::Cusp { normalizer, .. }) = inst.component_of.get(label) else {
                return Err(FamilyError::UnknownLabel(label.clone()));
            };
            Ok(normalizer.inverse().apply(UpperHalfPoint { re: *offset, im: *a }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for s in ["collar:gamma1:0.5:S2", "thick:S3", "cusp:E:2", "cusp:p1:1.5:0.25"] {
            let b: BasepointSpec = s.parse().unwrap();
            assert_eq!(b.to_string(), s);
        }
        assert!("collar:gamma1:1.5:S2".parse::<BasepointSpec>().is_err());
        assert!("cusp:E:0.5".parse::<BasepointSpec>().is_err());
        assert!("thick".parse::<BasepointSpec>().is_err());
    }

    #[test]
    fn json_round_trip() {
        let b = BasepointSpec::collar("gamma2", 0.0, "S2");
        let j = serde_json::to_string(&b).unwrap();
        assert_eq!(j, r#"{"at":"collar_boundary","curve":"gamma2","k":0.0,"side":"S2"}"#);
        assert_eq!(serde_json::from_str::<BasepointSpec>(&j).unwrap(), b);
        let c: BasepointSpec = serde_json::from_str(r#"{"at":"cusp_boundary","label":"E","a":2}"#).unwrap();
        assert_eq!(c, BasepointSpec::cusp("E", 2.0));
    }
}
