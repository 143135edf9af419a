use hyperbolic_core::UpperHalfPoint;

use crate::displacement::orbit_points_within;
use crate::{EnumError, Enumerator, OrbitTable};

/// `(Π(z,t), Π(h,z,t))`: cosets with `dist_i ≤ t` and with `dist_h ≤ t`.
/// Both are complete only for `t ≤ certified_radius - 1`, since
/// `dist_i ≤ dist_h + 1`.
pub fn counting_functions(table: &OrbitTable, t: f64) -> Result<(usize, usize), EnumError> {
    if t > table.certified_radius - 1.0 {
        return Err(EnumError::RadiusInsufficient { t, needed: t + 1.0, have: table.certified_radius });
    }
    let pi_h = table.records.partition_point(|r| r.dist_h <= t);
    let pi_z = table.records.iter().filter(|r| r.dist_i <= t).count();
    Ok((pi_z, pi_h))
}

/// Constant of the exponential orbit bound for balls of radius `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PackingBound {
    pub epsilon: f64,
    pub u: f64,
}

impl PackingBound {
    /// `U e^t`.
    pub fn bound(&self, t: f64) -> f64 {
        self.u * t.exp()
    }
}

/// `U(ε) = e^ε / (2 sinh²(ε/2))`.
pub fn packing_constant(epsilon: f64) -> Result<PackingBound, EnumError> {
    if !(epsilon > 0.0) {
        return Err(EnumError::NonPositiveEpsilon(epsilon));
    }
    let s = (epsilon / 2.0).sinh();
    Ok(PackingBound { epsilon, u: epsilon.exp() / (2.0 * s * s) })
}

/// Result of the ball-disjointness precheck on the orbit of a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Separation {
    /// Smallest distance between distinct orbit points, capped at the
    /// search radius.
    pub min_distance: f64,
    pub disjoint: bool,
}

/// Checks that the balls of radius `ε` about the orbit points of `z` are
/// disjoint. Orbit points coinciding with `z` (elliptic fixed points) are
/// one point, not two overlapping balls.
pub fn orbit_separation(en: &Enumerator, z: UpperHalfPoint, epsilon: f64) -> Result<Separation, EnumError> {
    let pts = orbit_points_within(en, z, 2.0 * epsilon)?;
    let min = pts.iter().filter(|p| !p.identity && p.distance > 1e-9).map(|p| p.distance).fold(f64::INFINITY, f64::min);
    Ok(Separation { min_distance: min.min(2.0 * epsilon), disjoint: min >= 2.0 * epsilon })
}
