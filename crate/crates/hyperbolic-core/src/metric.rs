use crate::{GeomError, UpperHalfPoint};

/// Hyperbolic distance `arccosh(1 + |z-w|²/(2 y y'))`.
///
/// Evaluated as `2 asinh(|z-w| / (2 sqrt(y y')))`, which is the same function
/// without the cancellation of `arccosh` near zero.
pub fn hyp_distance(z: UpperHalfPoint, w: UpperHalfPoint) -> f64 {
    let dx = z.re - w.re;
    let dy = z.im - w.im;
    let chord = dx.hypot(dy);
    2.0 * (chord / (2.0 * (z.im * w.im).sqrt())).asinh()
}

/// Returns `(z - n, n)` with `Re(z - n) ∈ [-1/2, 1/2)`.
pub fn strip_normalize(z: UpperHalfPoint) -> (UpperHalfPoint, i64) {
    let mut n = (z.re + 0.5).floor();
    let mut x = z.re - n;
    // guard the half-open interval against rounding in the subtraction
    if x >= 0.5 {
        n += 1.0;
        x = z.re - n;
    } else if x < -0.5 {
        n -= 1.0;
        x = z.re - n;
    }
    (UpperHalfPoint { re: x, im: z.im }, n as i64)
}

/// Distance from the strip representative of `z` to the horocycle segment
/// `{|Re w| ≤ 1/2, Im w = 1}`, i.e. `-log Im z` below the horocycle.
pub fn dist_to_base_horocycle(z: UpperHalfPoint) -> Result<f64, GeomError> {
    let (zh, _) = strip_normalize(z);
    if zh.im > 1.0 {
        return Err(GeomError::HeightAboveHorocycle { height: zh.im });
    }
    Ok(-zh.im.ln())
}

/// Distance to the geodesic `Re z = 0`.
pub fn dist_to_imag_axis(z: UpperHalfPoint) -> f64 {
    (z.re.abs() / z.im).asinh()
}

/// The point on the unit circle at distance `d` from the imaginary axis,
/// on the side given by the sign of `side`.
pub fn point_at_axis_distance(d: f64, side: f64) -> UpperHalfPoint {
    let ch = d.cosh();
    let sx = if side < 0.0 { -1.0 } else { 1.0 };
    UpperHalfPoint { re: sx * d.sinh() / ch, im: 1.0 / ch }
}
