//! Geodesics by ideal endpoints and the constructions the anchors need.

use hyperbolic_core::{Mobius, UpperHalfPoint};

/// Point of `ℝ ∪ {∞}`; `None` is `∞`.
pub type Ideal = Option<f64>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geodesic {
    pub u: Ideal,
    pub v: Ideal,
}

impl Geodesic {
    pub fn new(u: Ideal, v: Ideal) -> Self {
        Self { u, v }
    }

    pub fn image(&self, m: &Mobius) -> Self {
        Self { u: boundary_image(m, self.u), v: boundary_image(m, self.v) }
    }
}

/// Beyond this an image counts as `∞`; unit-determinant rescaling leaves
/// a rounding residue in the pole.
const POLE: f64 = 1e12;

/// `m(x)` on the boundary, snapping near-poles to `∞`.
pub fn boundary_image(m: &Mobius, x: Ideal) -> Ideal {
    m.apply_boundary(x).filter(|y| y.abs() < POLE * (1.0 + x.map_or(0.0, f64::abs)))
}

/// Maps `u ↦ 0` and `v ↦ ∞`; `None` when the endpoints coincide.
pub fn to_axis(u: Ideal, v: Ideal) -> Option<Mobius> {
    let m = match (u, v) {
        (None, Some(v)) => Mobius::new(0.0, -1.0, 1.0, -v),
        (Some(u), None) => Mobius::new(1.0, -u, 0.0, 1.0),
        (Some(u), Some(v)) if u > v => Mobius::new(1.0, -u, 1.0, -v),
        (Some(u), Some(v)) => Mobius::new(-1.0, u, 1.0, -v),
        (None, None) => return None,
    };
    Mobius::unimodular(m.a, m.b, m.c, m.d).ok()
}

/// Maps `p ↦ ∞`.
pub fn to_infinity(p: Ideal) -> Mobius {
    match p {
        None => Mobius::IDENTITY,
        Some(p) => Mobius::new(0.0, -1.0, 1.0, -p),
    }
}

/// Axis of a hyperbolic element, oriented from repelling to attracting.
pub fn axis_of(m: &Mobius) -> Geodesic {
    let (att, rep) = m.fixed_points();
    Geodesic::new(rep, att)
}

/// Common perpendicular of two ultraparallel geodesics.
pub fn common_perpendicular(g: Geodesic, h: Geodesic) -> Option<Geodesic> {
    let q = to_axis(g.u, g.v)?;
    let (e1, e2) = (boundary_image(&q, h.u)?, boundary_image(&q, h.v)?);
    if !(e1 * e2 > 0.0) {
        return None;
    }
    let r = (e1 * e2).sqrt() * e1.signum();
    let qi = q.inverse();
    Some(Geodesic::new(boundary_image(&qi, Some(r)), boundary_image(&qi, Some(-r))))
}

/// Geodesic through the ideal point `p` perpendicular to `g`.
pub fn perpendicular_through(g: Geodesic, p: Ideal) -> Option<Geodesic> {
    let q = to_axis(g.u, g.v)?;
    let e = boundary_image(&q, p)?;
    if e == 0.0 {
        return None;
    }
    let qi = q.inverse();
    Some(Geodesic::new(p, boundary_image(&qi, Some(-e))))
}

/// Bisector of two geodesics perpendicular to `axis`.
pub fn bisector_along(axis: Geodesic, s: Geodesic, t: Geodesic) -> Option<Geodesic> {
    let q = to_axis(axis.u, axis.v)?;
    let r1 = boundary_image(&q, s.u)?.abs();
    let r2 = boundary_image(&q, t.u)?.abs();
    let rho = (r1 * r2).sqrt();
    let qi = q.inverse();
    Some(Geodesic::new(boundary_image(&qi, Some(rho)), boundary_image(&qi, Some(-rho))))
}

/// Bisector of two geodesics asymptotic at `p`.
pub fn bisector_at(p: Ideal, s: Geodesic, t: Geodesic) -> Option<Geodesic> {
    let q = to_infinity(p);
    let other = |g: Geodesic| {
        let (a, b) = (boundary_image(&q, g.u), boundary_image(&q, g.v));
        match (a, b) {
            (None, x) | (x, None) => x,
            _ => None,
        }
    };
    let m = 0.5 * (other(s)? + other(t)?);
    Some(Geodesic::new(p, q.inverse().apply_boundary(Some(m))))
}

enum Shape {
    Circle { c: f64, r: f64 },
    Line { x: f64 },
}

fn shape(g: Geodesic) -> Option<Shape> {
    match (g.u, g.v) {
        (Some(u), Some(v)) => Some(Shape::Circle { c: 0.5 * (u + v), r: 0.5 * (u - v).abs() }),
        (Some(x), None) | (None, Some(x)) => Some(Shape::Line { x }),
        (None, None) => None,
    }
}

/// Intersection point of two geodesics, if they cross.
pub fn intersect(g: Geodesic, h: Geodesic) -> Option<UpperHalfPoint> {
    let (x, y2) = match (shape(g)?, shape(h)?) {
        (Shape::Line { .. }, Shape::Line { .. }) => return None,
        (Shape::Line { x }, Shape::Circle { c, r }) | (Shape::Circle { c, r }, Shape::Line { x }) => {
            (x, r * r - (x - c) * (x - c))
        }
        (Shape::Circle { c: c1, r: r1 }, Shape::Circle { c: c2, r: r2 }) => {
            if c1 == c2 {
                return None;
            }
            let x = (r1 * r1 - r2 * r2 + c2 * c2 - c1 * c1) / (2.0 * (c2 - c1));
            (x, r1 * r1 - (x - c1) * (x - c1))
        }
    };
    (y2 > 0.0).then(|| UpperHalfPoint { re: x, im: y2.sqrt() })
}
