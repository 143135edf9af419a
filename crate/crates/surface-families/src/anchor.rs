//! Thick-part anchors. Each pants is two right-angled hexagons (or ideal
//! polygons when boundaries are cusps) cut out by the three seams; the
//! anchor is the centre of the seam triangle of the hexagon adjacent to
//! the boundary axes of `X`, `Y` and `XY`.

use hyperbolic_core::{Mobius, UpperHalfPoint, PARABOLIC_TOL};

use crate::geometry::{
    axis_of, bisector_along, bisector_at, common_perpendicular, intersect, perpendicular_through, Geodesic, Ideal,
};

#[derive(Debug, Clone, Copy)]
enum Feature {
    Axis(Geodesic),
    Point(Ideal),
}

fn feature(m: &Mobius) -> Feature {
    if (m.trace().abs() - 2.0).abs() <= PARABOLIC_TOL {
        Feature::Point(m.fixed_points().0)
    } else {
        Feature::Axis(axis_of(m))
    }
}

fn seam(a: Feature, b: Feature) -> Option<Geodesic> {
    match (a, b) {
        (Feature::Axis(g), Feature::Axis(h)) => common_perpendicular(g, h),
        (Feature::Axis(g), Feature::Point(p)) | (Feature::Point(p), Feature::Axis(g)) => perpendicular_through(g, p),
        (Feature::Point(p), Feature::Point(q)) => Some(Geodesic::new(p, q)),
    }
}

fn bisector(f: Feature, s: Geodesic, t: Geodesic) -> Option<Geodesic> {
    match f {
        Feature::Axis(g) => bisector_along(g, s, t),
        Feature::Point(p) => bisector_at(p, s, t),
    }
}

/// Incenter of the seam triangle of a pants with boundary elements
/// `[X, Y, (XY)⁻¹]`.
pub fn seam_incenter(boundary: &[Mobius; 3]) -> Option<UpperHalfPoint> {
    let f = boundary.map(|m| feature(&m));
    let s01 = seam(f[0], f[1])?;
    let s12 = seam(f[1], f[2])?;
    let s20 = seam(f[2], f[0])?;
    let b0 = bisector(f[0], s20, s01)?;
    let b1 = bisector(f[1], s01, s12)?;
    intersect(b0, b1)
}

/// Height of the foot of the seam to boundary `to` on the imaginary axis,
/// with the pants seen through `view` so that one of its boundary axes is
/// the imaginary axis.
pub fn seam_foot(boundary: &[Mobius; 3], to: usize, view: &Mobius) -> Option<f64> {
    // exact axis; the viewed element is diagonal only up to rounding
    let axis = Feature::Axis(Geodesic::new(Some(0.0), None));
    let s = seam(axis, feature(&view.conjugate(&boundary[to])))?;
    match (s.u, s.v) {
        (Some(u), Some(v)) if u * v < 0.0 => Some((-u * v).sqrt()),
        _ => None,
    }
}
