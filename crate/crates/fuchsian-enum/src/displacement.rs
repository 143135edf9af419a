use hyperbolic_core::{hyp_distance, UpperHalfPoint};

use crate::{EnumError, EnumOptions, Enumerator, GroupPresentation};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitPoint {
    pub point: UpperHalfPoint,
    pub distance: f64,
    /// Produced by the identity element itself.
    pub identity: bool,
}

/// All orbit points `γz` with `d(z, γz) ≤ rho`, one per group element
/// (modulo ±1).
pub fn orbit_points_within(en: &Enumerator, z: UpperHalfPoint, rho: f64) -> Result<Vec<OrbitPoint>, EnumError> {
    let min_height = z.im * (-rho).exp();
    let reach = 2.0 * z.im * (rho.cosh() - 1.0);
    let mut out = Vec::new();
    en.visit(z, min_height, false, |r| {
        let w = r.witness.apply(z);
        let dy = z.im - r.height;
        let r2 = reach * r.height - dy * dy;
        if r2 < 0.0 {
            return;
        }
        let s = r2.sqrt();
        let base = z.re - w.re;
        let stab = r.bottom_row.0.abs() <= 1e-9;
        for n in (base - s).ceil() as i64..=(base + s).floor() as i64 {
            let p = w.translate(n as f64);
            let d = hyp_distance(z, p);
            if d > rho {
                continue;
            }
            // the cusp-stabilizer coset holds the identity at the zero shift
            let identity = stab && (p.re - z.re).abs() <= 1e-9 * (1.0 + z.re.abs());
            out.push(OrbitPoint { point: p, distance: d, identity });
        }
    })?;
    Ok(out)
}

/// `min d(z, γz)` over `γ ≠ id` with `d ≤ search_radius`; `+∞` when no
/// such element exists within the radius.
pub fn min_displacement_with(en: &Enumerator, z: UpperHalfPoint, search_radius: f64) -> Result<f64, EnumError> {
    let pts = orbit_points_within(en, z, search_radius)?;
    Ok(pts.iter().filter(|p| !p.identity).map(|p| p.distance).fold(f64::INFINITY, f64::min))
}

pub fn min_displacement(g: &GroupPresentation, z: UpperHalfPoint, search_radius: f64) -> Result<f64, EnumError> {
    let en = Enumerator::new(g, EnumOptions::default())?;
    min_displacement_with(&en, z, search_radius)
}
