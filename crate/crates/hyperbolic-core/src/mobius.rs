use std::fmt;
use std::ops::Mul;

use crate::{GeomError, UpperHalfPoint};

/// A real 2×2 matrix `(a b; c d)` with unit determinant, taken modulo ±1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// `x*y - z*w` with one rounding, via the fma splitting of Kahan.
#[inline]
fn diff_of_products(x: f64, y: f64, z: f64, w: f64) -> f64 {
    let zw = z * w;
    let err = (-z).mul_add(w, zw);
    let r = x.mul_add(y, -zw);
    r + err
}

impl Mobius {
    pub const IDENTITY: Mobius = Mobius { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    /// Raw constructor; no determinant check.
    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    /// Scales a positive-determinant matrix to determinant one.
    pub fn unimodular(a: f64, b: f64, c: f64, d: f64) -> Result<Self, GeomError> {
        let det = diff_of_products(a, d, b, c);
        if !(det > 0.0) || !det.is_finite() {
            return Err(GeomError::NonPositiveDeterminant(det));
        }
        let s = det.sqrt().recip();
        Ok(Self::new(a * s, b * s, c * s, d * s))
    }

    pub const fn translation(t: f64) -> Self {
        Self::new(1.0, t, 0.0, 1.0)
    }

    /// `diag(λ, 1/λ)`, i.e. `z ↦ λ² z`.
    pub fn diag(lambda: f64) -> Self {
        Self::new(lambda, 0.0, 0.0, lambda.recip())
    }

    /// `z ↦ -1/z`.
    pub const fn inversion() -> Self {
        Self::new(0.0, -1.0, 1.0, 0.0)
    }

    pub fn det(&self) -> f64 {
        diff_of_products(self.a, self.d, self.b, self.c)
    }

    /// Rounding noise expected in `det` for matrices of this size.
    pub fn det_noise(&self) -> f64 {
        8.0 * f64::EPSILON * ((self.a * self.d).abs() + (self.b * self.c).abs())
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.a, -self.b, -self.c, -self.d)
    }

    /// Product followed by a √det correction when the drift exceeds the
    /// rounding noise of the entries. Rescaling inside the noise floor would
    /// only move the matrix further from the exact product.
    pub fn compose(&self, o: &Mobius) -> Self {
        let m = self.compose_raw(o);
        let det = m.det();
        let drift = (det - 1.0).abs();
        // entries of a product of large factors may come out of heavy
        // cancellation, so the noise scale is that of the factors
        let scale = self.max_abs() * o.max_abs();
        let noise = m.det_noise().max(16.0 * f64::EPSILON * scale * scale);
        if drift > 1e-12 && drift > noise && det > 0.0 {
            let s = det.sqrt().recip();
            Mobius::new(m.a * s, m.b * s, m.c * s, m.d * s)
        } else {
            m
        }
    }

    /// Plain matrix product with no determinant correction. Traces of short
    /// words of large matrices are more faithful this way, since a rescale
    /// sees rounding inherited from the factors as drift.
    pub fn compose_raw(&self, o: &Mobius) -> Self {
        Mobius::new(
            self.a.mul_add(o.a, self.b * o.c),
            self.a.mul_add(o.b, self.b * o.d),
            self.c.mul_add(o.a, self.d * o.c),
            self.c.mul_add(o.b, self.d * o.d),
        )
    }

    /// Left multiplication by `z ↦ z + n`.
    pub fn shift_left(&self, n: f64) -> Self {
        Mobius::new(self.a + n * self.c, self.b + n * self.d, self.c, self.d)
    }

    /// Right multiplication by `z ↦ z + n`.
    pub fn shift_right(&self, n: f64) -> Self {
        Mobius::new(self.a, self.b + n * self.a, self.c, self.d + n * self.c)
    }

    /// `|cz + d|²`.
    #[inline]
    pub fn denom_sq(&self, z: UpperHalfPoint) -> f64 {
        let u = self.c.mul_add(z.re, self.d);
        let v = self.c * z.im;
        u.mul_add(u, v * v)
    }

    /// `Im(m z) = Im z / |cz + d|²`.
    #[inline]
    pub fn height_at(&self, z: UpperHalfPoint) -> f64 {
        z.im / self.denom_sq(z)
    }

    /// `(az + b)/(cz + d)`.
    pub fn apply(&self, z: UpperHalfPoint) -> UpperHalfPoint {
        let nr = self.a.mul_add(z.re, self.b);
        let ni = self.a * z.im;
        let dr = self.c.mul_add(z.re, self.d);
        let di = self.c * z.im;
        let den = dr.mul_add(dr, di * di);
        let re = nr.mul_add(dr, ni * di) / den;
        UpperHalfPoint { re, im: z.im / den }
    }

    /// Image of a boundary point; `None` stands for ∞.
    pub fn apply_boundary(&self, x: Option<f64>) -> Option<f64> {
        match x {
            None => (self.c != 0.0).then(|| self.a / self.c),
            Some(x) => {
                let den = self.c.mul_add(x, self.d);
                (den != 0.0).then(|| self.a.mul_add(x, self.b) / den)
            }
        }
    }

    /// Sign representative: the first nonzero of `(c, d, a)` is positive.
    pub fn canonical(&self) -> Self {
        let lead = if self.c != 0.0 {
            self.c
        } else if self.d != 0.0 {
            self.d
        } else {
            self.a
        };
        if lead < 0.0 {
            self.neg()
        } else {
            *self
        }
    }

    /// Sign-normalized bottom row.
    pub fn bottom_row(&self) -> (f64, f64) {
        if self.c < 0.0 || (self.c == 0.0 && self.d < 0.0) {
            (-self.c, -self.d)
        } else {
            (self.c, self.d)
        }
    }

    /// Entrywise comparison modulo ±1, relative to the entry scale.
    pub fn approx_eq(&self, o: &Mobius, tol: f64) -> bool {
        let scale = self.max_abs().max(o.max_abs()).max(1.0);
        let same = |s: f64| {
            (self.a - s * o.a).abs() <= tol * scale
                && (self.b - s * o.b).abs() <= tol * scale
                && (self.c - s * o.c).abs() <= tol * scale
                && (self.d - s * o.d).abs() <= tol * scale
        };
        same(1.0) || same(-1.0)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&Mobius::IDENTITY, tol)
    }

    pub fn max_abs(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }

    /// `self · o · self⁻¹`.
    pub fn conjugate(&self, o: &Mobius) -> Self {
        self.compose(o).compose(&self.inverse())
    }

    /// Fixed points on ℝ ∪ {∞}. Returns `(attracting, repelling)` for
    /// hyperbolic elements and the single fixed point twice for parabolic
    /// ones; `None` entries denote ∞.
    pub fn fixed_points(&self) -> (Option<f64>, Option<f64>) {
        let m = if self.trace() < 0.0 { self.neg() } else { *self };
        let t = m.trace();
        if m.c.abs() <= 1e-300 {
            // upper triangular: ∞ plus the finite root of (a-d)z + b = 0
            let fin = if (m.a - m.d).abs() > 0.0 { Some(m.b / (m.d - m.a)) } else { None };
            return if m.a.abs() > m.d.abs() { (None, fin) } else { (fin, None) };
        }
        let disc = (t * t - 4.0).max(0.0).sqrt();
        let base = (m.a - m.d) / (2.0 * m.c);
        let off = disc / (2.0 * m.c);
        let p = base + off;
        let q = base - off;
        // derivative 1/(cz+d)² is below one at the attracting point
        let dp = (m.c * p + m.d).abs();
        if dp > 1.0 {
            (Some(p), Some(q))
        } else {
            (Some(q), Some(p))
        }
    }
}

impl Mul for Mobius {
    type Output = Mobius;
    fn mul(self, rhs: Mobius) -> Mobius {
        self.compose(&rhs)
    }
}

impl fmt::Display for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}
