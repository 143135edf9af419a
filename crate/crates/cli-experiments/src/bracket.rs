//! Predicted decay exponents of the Eisenstein series as a pinching
//! length goes to zero: `E ≍ L^α` with `α` between an upper-bound and a
//! lower-bound exponent.

use serde::Serialize;
use surface_families::{BasepointSpec, ChainFamilySpec, FamilyError};

/// Absolute slack on fitted slopes.
pub const BRACKET_TOL: f64 = 0.15;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bracket {
    /// Exponent of the upper bound on `E`; the smaller one.
    pub lower: f64,
    /// Exponent of the lower bound on `E`.
    pub upper: f64,
    pub tol: f64,
    /// Which estimate pair the exponents come from.
    pub anchor: &'static str,
}

impl Bracket {
    fn new(lower: f64, upper: f64, anchor: &'static str) -> Self {
        Self { lower, upper, tol: BRACKET_TOL, anchor }
    }

    pub fn contains(&self, slope: f64) -> bool {
        slope >= self.lower - self.tol && slope <= self.upper + self.tol
    }
}

/// Whether the gluing `cut` separates pants `p` from the pants holding
/// the Eisenstein cusp.
fn beyond(spec: &ChainFamilySpec, cut: usize, p: usize) -> bool {
    let root = spec.eisenstein_cusp.pants;
    let mut seen = vec![false; spec.pants.len()];
    let mut stack = vec![root];
    seen[root] = true;
    while let Some(q) = stack.pop() {
        for (k, g) in spec.gluings.iter().enumerate() {
            let next = match g.pants {
                _ if k == cut => continue,
                (a, b) if a == q => b,
                (a, b) if b == q => a,
                _ => continue,
            };
            if !seen[next] {
                seen[next] = true;
                stack.push(next);
            }
        }
    }
    !seen[p]
}

fn pants_of(spec: &ChainFamilySpec, tag: &str) -> Result<usize, FamilyError> {
    tag.strip_prefix('S')
        .and_then(|n| n.parse::<usize>().ok())
        .filter(|&n| n >= 1 && n <= spec.pants.len())
        .map(|n| n - 1)
        .ok_or_else(|| FamilyError::UnknownLabel(tag.into()))
}

/// Bracket for the slope of `log E` against `log L` of `varied` at the
/// basepoint, for real `s = sigma`. `None` where no estimate pins it.
pub fn bracket_for(
    spec: &ChainFamilySpec,
    bp: &BasepointSpec,
    varied: &str,
    sigma: f64,
) -> Result<Option<Bracket>, FamilyError> {
    let cut = spec.gluing_of(varied)?;
    let s = sigma;
    Ok(match bp {
        BasepointSpec::ThickPoint { component } => {
            let p = pants_of(spec, component)?;
            beyond(spec, cut, p).then(|| Bracket::new(2.0 * (s - 1.0), 2.0 * s, "thick part beyond the curve"))
        }
        BasepointSpec::CollarBoundary { curve, k, side } if curve == varied => {
            let p = pants_of(spec, side)?;
            if beyond(spec, cut, p) {
                Some(Bracket::new((1.0 + k) * (s - 1.0), (1.0 + k) * s, "collar boundary beyond the curve"))
            } else if *k == 1.0 && p != spec.eisenstein_cusp.pants {
                Some(Bracket::new(0.0, s, "collar boundary on the near side"))
            } else {
                None
            }
        }
        _ => None,
    })
}
