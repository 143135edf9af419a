use fuchsian_enum::{Enumerator, GroupPresentation};
use hyperbolic_core::UpperHalfPoint;

use crate::series::{eisenstein_eval_with, EvalOptions};
use crate::sum::ComplexSum;
use crate::{EisError, SpectralParameter};

/// Relative tolerance fixing the common coset set of the stencil.
pub const PDE_REL_TOL: f64 = 1e-6;

pub fn pde_residual(
    g: &GroupPresentation,
    z: UpperHalfPoint,
    s: SpectralParameter,
    step: f64,
) -> Result<f64, EisError> {
    let opts = EvalOptions::default();
    let en = Enumerator::new(g, opts.enumeration)?;
    pde_residual_with(&en, z, s, step, PDE_REL_TOL, &opts)
}

/// `|Δ_h E - s(s-1)E| / |E|` with the five-point Laplacian
/// `y²(E_xx + E_yy)` of step `step`.
///
/// All five values are summed over one coset set, the one the adaptive
/// evaluation picks at the centre, so the truncated sum is itself an
/// eigenfunction and the residual measures the difference scheme only.
pub fn pde_residual_with(
    en: &Enumerator,
    z: UpperHalfPoint,
    s: SpectralParameter,
    step: f64,
    rel_tol: f64,
    opts: &EvalOptions,
) -> Result<f64, EisError> {
    s.check()?;
    if !(step > 0.0) || step >= z.im / 2.0 {
        return Err(EisError::StencilOutOfRegion { step, height: z.im });
    }
    let centre = eisenstein_eval_with(en, z, s, rel_tol, opts)?;
    let floor = if centre.truncation_radius.is_finite() { (-centre.truncation_radius).exp() } else { 0.0 };
    let pts = [
        z,
        UpperHalfPoint { re: z.re + step, im: z.im },
        UpperHalfPoint { re: z.re - step, im: z.im },
        UpperHalfPoint { re: z.re, im: z.im + step },
        UpperHalfPoint { re: z.re, im: z.im - step },
    ];
    let (sums, _) = en.fold_tree(
        z,
        floor,
        || [ComplexSum::default(); 5],
        |acc: &mut [ComplexSum; 5], h| {
            let (c, d) = (h.witness.c, h.witness.d);
            for (a, p) in acc.iter_mut().zip(&pts) {
                let u = c * p.re + d;
                let v = c * p.im;
                a.add(s.power(p.im / (u * u + v * v)));
            }
        },
        |a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                x.merge(y);
            }
        },
    )?;
    let e: Vec<_> = sums.iter().map(|a| a.value()).collect();
    let lap = (e[1] + e[2] + e[3] + e[4] - 4.0 * e[0]) * (z.im * z.im / (step * step));
    let sc = s.as_complex();
    Ok((lap - sc * (sc - 1.0) * e[0]).norm() / e[0].norm())
}
