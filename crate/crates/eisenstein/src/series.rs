use fuchsian_enum::{orbit_separation, packing_constant, EnumOptions, Enumerator, GroupPresentation, OrbitTable};
use hyperbolic_core::{strip_normalize, UpperHalfPoint};
use num_complex::Complex64;

use crate::sum::ComplexSum;
use crate::{EisError, SpectralParameter};

/// Truncated series with its tail estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    pub tail_bound: f64,
    /// Cosets with `dist_h` up to this radius below the horocycle are
    /// summed; `∞` when the sum is exact.
    pub truncation_radius: f64,
    pub cosets_used: usize,
    /// The enumeration was complete and the tail met the tolerance.
    pub complete: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct EvalOptions {
    pub enumeration: EnumOptions,
    /// Ball radius for the packing cap on the tail prefactor.
    pub packing_epsilon: f64,
    /// Largest truncation radius tried.
    pub max_radius: f64,
    pub max_passes: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self { enumeration: EnumOptions::default(), packing_epsilon: 0.3, max_radius: 40.0, max_passes: 6 }
    }
}

/// One streaming pass at a fixed truncation radius.
#[derive(Debug, Clone, Copy)]
pub struct TruncatedSum {
    pub radius: f64,
    pub value: Complex64,
    pub cosets: usize,
    /// Cosets with `dist_h ≤ radius`.
    pub within: usize,
    /// Counts on the shells `(T-2, T-1]` and `(T-1, T]` below the horocycle.
    pub shells: [usize; 2],
    pub complete: bool,
    pub budget_hit: bool,
}

impl TruncatedSum {
    /// Empirical prefactor `Ĉ` of `Π(h,z,t) ≈ Ĉ e^t` from the last two
    /// shells and the total count.
    pub fn growth_prefactor(&self) -> f64 {
        let t = self.radius;
        let w = 1.0 - (-1f64).exp();
        let last = self.shells[1] as f64 / (t.exp() * w);
        let prev = self.shells[0] as f64 / ((t - 1.0).exp() * w);
        last.max(prev).max(self.within as f64 / t.exp())
    }
}

#[derive(Default)]
struct Acc {
    sum: ComplexSum,
    within: usize,
    shells: [usize; 2],
}

/// Sum of `(Im δ̂z)^s` over cosets with `Im δ̂z ≥ e^{-radius}`.
pub fn truncated_sum(
    en: &Enumerator,
    z: UpperHalfPoint,
    s: SpectralParameter,
    radius: f64,
) -> Result<TruncatedSum, EisError> {
    let floor = (-radius).exp();
    let (l1, l2) = ((1.0 - radius).exp(), (2.0 - radius).exp());
    let (acc, summary) = en.fold_tree(
        z,
        floor,
        Acc::default,
        |a: &mut Acc, h| {
            let y = h.point.im;
            a.sum.add(s.power(y));
            if y.ln().abs() <= radius {
                a.within += 1;
            }
            if y < l1 {
                a.shells[1] += 1;
            } else if y < l2 {
                a.shells[0] += 1;
            }
        },
        |a, b| {
            a.sum.merge(b.sum);
            a.within += b.within;
            a.shells[0] += b.shells[0];
            a.shells[1] += b.shells[1];
        },
    )?;
    Ok(TruncatedSum {
        radius,
        value: acc.sum.value(),
        cosets: summary.visited,
        within: acc.within,
        shells: acc.shells,
        complete: summary.complete,
        budget_hit: summary.budget_hit,
    })
}

/// Tail estimate `Ĉ σ/(σ-1) e^{-(σ-1)T}`.
pub fn tail_estimate(prefactor: f64, sigma: f64, radius: f64) -> f64 {
    prefactor * sigma / (sigma - 1.0) * (-(sigma - 1.0) * radius).exp()
}

/// Rigorous prefactor `U(ε) e` from `Π(h,z,t) ≤ Π(z,t+1) ≤ U e^{t+1}`,
/// available when the orbit balls of radius `ε` are disjoint.
pub fn packing_prefactor(en: &Enumerator, z: UpperHalfPoint, epsilon: f64) -> Result<Option<f64>, EisError> {
    let u = packing_constant(epsilon)?;
    let sep = orbit_separation(en, z, epsilon)?;
    Ok(sep.disjoint.then_some(u.u * std::f64::consts::E))
}

pub fn eisenstein_eval(
    g: &GroupPresentation,
    z: UpperHalfPoint,
    s: SpectralParameter,
    rel_tol: f64,
) -> Result<SeriesValue, EisError> {
    let opts = EvalOptions::default();
    let en = Enumerator::new(g, opts.enumeration)?;
    eisenstein_eval_with(&en, z, s, rel_tol, &opts)
}

/// Adaptive evaluation: sum to a radius, estimate the tail, and rerun at
/// the radius the estimate asks for until it meets `rel_tol`.
pub fn eisenstein_eval_with(
    en: &Enumerator,
    z: UpperHalfPoint,
    s: SpectralParameter,
    rel_tol: f64,
    opts: &EvalOptions,
) -> Result<SeriesValue, EisError> {
    s.check()?;
    if !(rel_tol > 0.0) {
        return Err(EisError::InvalidTolerance(rel_tol));
    }
    if en.domain.is_cusp_stabilizer_only() {
        let (w, _) = strip_normalize(z);
        return Ok(SeriesValue {
            value: s.power(w.im),
            tail_bound: 0.0,
            truncation_radius: f64::INFINITY,
            cosets_used: 1,
            complete: en.domain.certified,
        });
    }
    let sigma = s.sigma;
    let (_, top) = en.ford_point(z)?;
    let cap = packing_prefactor(en, z, opts.packing_epsilon)?;
    let mut radius = (8.0f64).max(6.0 - top.im.ln()).min(opts.max_radius);
    let mut last = None;
    for _ in 0..opts.max_passes.max(1) {
        let pass = truncated_sum(en, z, s, radius)?;
        let mut c = pass.growth_prefactor();
        if let Some(u) = cap {
            c = c.min(u);
        }
        let tail = tail_estimate(c, sigma, radius);
        let norm = pass.value.norm();
        let mut out = SeriesValue {
            value: pass.value,
            tail_bound: tail,
            truncation_radius: radius,
            cosets_used: pass.cosets,
            complete: false,
        };
        if pass.budget_hit {
            return Err(EisError::BudgetExceeded { partial: Box::new(out) });
        }
        if tail <= rel_tol * norm {
            out.complete = pass.complete;
            return Ok(out);
        }
        last = Some(out);
        if radius >= opts.max_radius {
            break;
        }
        let need = (c * sigma / ((sigma - 1.0) * rel_tol * norm)).ln() / (sigma - 1.0) + 0.25;
        radius = need.max(radius + 0.5).min(opts.max_radius);
    }
    Ok(last.expect("at least one pass"))
}

/// `Σ height^s` over the records of a table.
pub fn partial_sum(table: &OrbitTable, s: SpectralParameter) -> Complex64 {
    let mut acc = ComplexSum::default();
    for r in &table.records {
        acc.add(s.power(r.height));
    }
    acc.value()
}

/// `Σ e^{-s·dist_h}`, the Stieltjes integral of `e^{-st}` against
/// `Π(h,z,t)`. Equal to the direct sum when every height is below one.
pub fn eisenstein_from_counting(table: &OrbitTable, s: SpectralParameter) -> Result<Complex64, EisError> {
    s.check()?;
    if !table.complete {
        return Err(EisError::IncompleteTable);
    }
    if let Some(r) = table.records.iter().find(|r| r.height >= 1.0) {
        return Err(EisError::RegimeViolation { height: r.height });
    }
    let e = -s.as_complex();
    let mut acc = ComplexSum::default();
    for r in &table.records {
        acc.add((e * r.dist_h).exp());
    }
    Ok(acc.value())
}
