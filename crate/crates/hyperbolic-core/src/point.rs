use std::fmt;
use std::str::FromStr;

use crate::GeomError;

/// A point `re + i·im` of the upper half-plane, `im > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperHalfPoint {
    pub re: f64,
    pub im: f64,
}

impl UpperHalfPoint {
    pub fn new(re: f64, im: f64) -> Result<Self, GeomError> {
        if im > 0.0 && im.is_finite() && re.is_finite() {
            Ok(Self { re, im })
        } else {
            Err(GeomError::NotInUpperHalfPlane { re, im })
        }
    }

    /// The point `i`.
    pub const I: UpperHalfPoint = UpperHalfPoint { re: 0.0, im: 1.0 };

    pub fn translate(self, t: f64) -> Self {
        Self { re: self.re + t, im: self.im }
    }

    pub fn abs_sq(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

impl fmt::Display for UpperHalfPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.re == 0.0 {
            write!(f, "{}i", self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl FromStr for UpperHalfPoint {
    type Err = GeomError;

    /// Accepts `x+yi`, `x-yi` (rejected as not in H), `yi`, `i`, or `x,y`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GeomError::NotInUpperHalfPlane { re: f64::NAN, im: f64::NAN };
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some((a, b)) = t.split_once(',') {
            let re = a.parse().map_err(|_| bad())?;
            let im = b.parse().map_err(|_| bad())?;
            return UpperHalfPoint::new(re, im);
        }
        let body = t.strip_suffix('i').ok_or_else(bad)?;
        // split at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        let (re, im) = match split {
            Some(k) => {
                let re: f64 = body[..k].parse().map_err(|_| bad())?;
                let im_s = &body[k..];
                let im: f64 = match im_s {
                    "+" => 1.0,
                    "-" => -1.0,
                    _ => im_s.parse().map_err(|_| bad())?,
                };
                (re, im)
            }
            None => {
                let im: f64 = if body.is_empty() { 1.0 } else { body.parse().map_err(|_| bad())? };
                (0.0, im)
            }
        };
        UpperHalfPoint::new(re, im)
    }
}
