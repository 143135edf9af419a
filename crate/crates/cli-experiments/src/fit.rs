use serde::Serialize;

use crate::ExperimentError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    /// Standard error of the slope; `NaN` for two points, where the
    /// residual variance has no degrees of freedom.
    pub stderr: f64,
}

/// Ordinary least squares slope of `y` against `x`.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<SlopeFit, ExperimentError> {
    let n = points.len();
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(ExperimentError::DegenerateFit("non-finite point".into()));
    }
    if n < 2 {
        return Err(ExperimentError::DegenerateFit(format!("{n} point(s)")));
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(ExperimentError::DegenerateFit("all abscissae equal".into()));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let stderr = if n > 2 {
        let rss: f64 = points.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
        (rss / (nf - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    Ok(SlopeFit { slope, stderr })
}
