use std::f64::consts::PI;

use hyperbolic_core::{strip_normalize, UpperHalfPoint};
use num_complex::Complex64;

use crate::sum::ComplexSum;
use crate::{EisError, SeriesValue, SpectralParameter};

fn gcd(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

/// Modular-group Eisenstein series by direct summation over coprime pairs.
///
/// Sums `y^s |cz+d|^{-2s}` over sign-normalized coprime `(c, d)` with
/// `|cz+d|² ≤ R`, the largest such ellipse inside the box
/// `|c|, |d| ≤ pair_cap`, then adds the integral of the asymptotic pair
/// density `3/(π y)` over `|cz+d|² > R`. `tail_bound` is the size of that
/// correction.
pub fn modular_oracle(z: UpperHalfPoint, s: SpectralParameter, pair_cap: u64) -> Result<SeriesValue, EisError> {
    s.check()?;
    let (w, _) = strip_normalize(z);
    let (x, y) = (w.re, w.im);
    let n = pair_cap.max(1) as f64;
    let root = n * y.min(y / (y + x.abs()));
    let r2 = root * root;
    let mut acc = ComplexSum::default();
    acc.add(s.power(y));
    let c_max = (root / y).floor() as u64;
    for c in 1..=c_max {
        let cf = c as f64;
        let rest = r2 - (cf * y) * (cf * y);
        if rest < 0.0 {
            continue;
        }
        let half = rest.sqrt();
        let lo = (-cf * x - half).ceil() as i64;
        let hi = (-cf * x + half).floor() as i64;
        let cy2 = (cf * y) * (cf * y);
        for d in lo..=hi {
            if gcd(c, d.unsigned_abs()) != 1 {
                continue;
            }
            let u = cf * x + d as f64;
            acc.add(s.power(y / (u * u + cy2)));
        }
    }
    // y^s ∫_R^∞ r^{-s} (3/(π y)) dr
    let sc = s.as_complex();
    let tail = 3.0 / PI * (Complex64::from(y).powc(sc - 1.0)) * Complex64::from(r2).powc(1.0 - sc) / (sc - 1.0);
    acc.add(tail);
    Ok(SeriesValue {
        value: acc.value(),
        tail_bound: tail.norm(),
        truncation_radius: r2.ln(),
        cosets_used: 0,
        complete: true,
    })
}
