use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use eisenstein::{eisenstein_eval_with, EvalOptions, SeriesValue, SpectralParameter};
use fuchsian_enum::Enumerator;
use hyperbolic_core::UpperHalfPoint;
use rayon::prelude::*;
use serde::Serialize;
use surface_families::{basepoint, glue_chain, BasepointSpec, ChainFamilySpec};

use crate::bracket::{bracket_for, Bracket};
use crate::fit::{fit_slope, SlopeFit};
use crate::{ExperimentError, SweepConfig};

pub const CSV_COLUMNS: [&str; 16] = [
    "family",
    "L1",
    "L2",
    "s_re",
    "s_im",
    "basepoint",
    "k",
    "z_re",
    "z_im",
    "E_re",
    "E_im",
    "tail",
    "T_trunc",
    "n_cosets",
    "runtime_ms",
    "status",
];

#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Ok,
    /// Evaluated, but the tail estimate stayed above the tolerance.
    Incomplete,
    Failed(String),
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Ok => f.write_str("ok"),
            Self::Incomplete => f.write_str("incomplete"),
            Self::Failed(m) => write!(f, "failed: {m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub family: String,
    pub varied: String,
    pub varied_length: f64,
    /// Lengths of the first two pinching labels.
    pub l1: Option<f64>,
    pub l2: Option<f64>,
    pub s_re: f64,
    pub s_im: f64,
    pub basepoint: String,
    pub k: Option<f64>,
    pub z: Option<UpperHalfPoint>,
    pub value: Option<SeriesValue>,
    pub runtime_ms: f64,
    pub status: RowStatus,
}

/// Shortest round-trip form, in exponent notation away from unit scale.
fn num(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

impl SweepRow {
    /// CSV fields in [`CSV_COLUMNS`] order.
    pub fn fields(&self) -> Vec<String> {
        let v = self.value.as_ref();
        vec![
            self.family.clone(),
            opt(self.l1),
            opt(self.l2),
            num(self.s_re),
            num(self.s_im),
            self.basepoint.clone(),
            opt(self.k),
            opt(self.z.map(|z| z.re)),
            opt(self.z.map(|z| z.im)),
            opt(v.map(|v| v.value.re)),
            opt(v.map(|v| v.value.im)),
            opt(v.map(|v| v.tail_bound)),
            opt(v.map(|v| v.truncation_radius)),
            v.map(|v| v.cosets_used.to_string()).unwrap_or_default(),
            format!("{:.1}", self.runtime_ms),
            self.status.to_string(),
        ]
    }

    pub fn failed(&self) -> bool {
        self.status != RowStatus::Ok
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeRow {
    pub varied: String,
    pub s: String,
    pub basepoint: String,
    pub points: usize,
    pub fit: Option<SlopeFit>,
    pub bracket: Bracket,
    pub in_bracket: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub family: String,
    pub rows: Vec<SweepRow>,
    pub fits: Vec<SlopeRow>,
}

impl SweepReport {
    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.failed()).count()
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<(), ExperimentError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_COLUMNS)?;
        for r in &self.rows {
            w.write_record(r.fields())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 fields")
    }

    /// The fits as JSON; free of timings, so identical across reruns.
    pub fn fits_json(&self) -> String {
        serde_json::to_string_pretty(&self.fits).expect("plain data") + "\n"
    }

    /// Writes the CSV to `path` and the fits next to it.
    pub fn write_files(&self, path: &Path) -> Result<PathBuf, ExperimentError> {
        let fits = path.with_extension("fits.json");
        self.write_csv(std::fs::File::create(path)?)?;
        std::fs::write(&fits, self.fits_json())?;
        Ok(fits)
    }
}

struct GridPoint {
    varied: String,
    length: f64,
    spec: ChainFamilySpec,
}

fn grid(config: &SweepConfig, base: &ChainFamilySpec) -> Result<Vec<GridPoint>, ExperimentError> {
    let mut base = base.clone();
    for (label, &l) in &config.fixed {
        base.set_length(label, l)?;
    }
    let mut out = Vec::new();
    for (label, values) in &config.l_grid {
        for &l in values {
            out.push(GridPoint { varied: label.clone(), length: l, spec: base.clone().with_length(label, l)? });
        }
    }
    Ok(out)
}

fn eval_row(
    en: &Enumerator,
    inst: &surface_families::FamilyInstance,
    bp: &BasepointSpec,
    s: SpectralParameter,
    config: &SweepConfig,
) -> Result<(UpperHalfPoint, SeriesValue), ExperimentError> {
    let z = basepoint(inst, bp)?;
    let v = eisenstein_eval_with(en, z, s, config.rel_tol, &EvalOptions::default())?;
    Ok((z, v))
}

fn point_rows(p: &GridPoint, config: &SweepConfig) -> Vec<SweepRow> {
    let built = glue_chain(&p.spec).map_err(ExperimentError::from).and_then(|inst| {
        let group = match &config.generator_order {
            Some(order) => {
                let mut sorted = order.clone();
                sorted.sort_unstable();
                if !sorted.iter().copied().eq(0..inst.group.generators.len()) {
                    return Err(ExperimentError::InvalidConfig(format!(
                        "generator order {order:?} does not permute {} generators",
                        inst.group.generators.len()
                    )));
                }
                inst.group.permuted(order)
            }
            None => inst.group.clone(),
        };
        let en = Enumerator::new(&group, EvalOptions::default().enumeration)?;
        Ok((inst, en))
    });
    let labels: Vec<Option<f64>> =
        (0..2).map(|k| p.spec.pinching_labels.get(k).and_then(|l| p.spec.length_of(&l.label).ok())).collect();
    let tasks: Vec<(SpectralParameter, &BasepointSpec)> =
        config.s_values.iter().flat_map(|&s| config.basepoints.iter().map(move |b| (s, b))).collect();
    tasks
        .par_iter()
        .map(|&(s, bp)| {
            let t = Instant::now();
            let res = match &built {
                Ok((inst, en)) => eval_row(en, inst, bp, s, config),
                Err(e) => Err(ExperimentError::InvalidConfig(format!("construction: {e}"))),
            };
            let mut row = SweepRow {
                family: p.spec.name.clone(),
                varied: p.varied.clone(),
                varied_length: p.length,
                l1: labels[0],
                l2: labels[1],
                s_re: s.sigma,
                s_im: s.tau,
                basepoint: bp.to_string(),
                k: bp.k(),
                z: None,
                value: None,
                runtime_ms: 0.0,
                status: RowStatus::Ok,
            };
            match res {
                Ok((z, v)) => {
                    row.z = Some(z);
                    row.status = if v.complete { RowStatus::Ok } else { RowStatus::Incomplete };
                    row.value = Some(v);
                }
                Err(e) => row.status = RowStatus::Failed(e.to_string()),
            }
            row.runtime_ms = t.elapsed().as_secs_f64() * 1e3;
            row
        })
        .collect()
}

fn fits(config: &SweepConfig, spec: &ChainFamilySpec, rows: &[SweepRow]) -> Vec<SlopeRow> {
    let mut out = Vec::new();
    for varied in config.l_grid.keys() {
        for s in config.s_values.iter().filter(|s| s.is_real()) {
            for bp in &config.basepoints {
                // an unknown label has already failed its rows
                let Ok(Some(bracket)) = bracket_for(spec, bp, varied, s.sigma) else { continue };
                let name = bp.to_string();
                let pts: Vec<(f64, f64)> = rows
                    .iter()
                    .filter(|r| &r.varied == varied && r.s_re == s.sigma && r.s_im == 0.0 && r.basepoint == name)
                    .filter(|r| !r.failed())
                    .filter_map(|r| {
                        let e = r.value.as_ref()?.value.re;
                        (e > 0.0).then(|| (r.varied_length.ln(), e.ln()))
                    })
                    .collect();
                let (fit, error) = match fit_slope(&pts) {
                    Ok(f) => (Some(f), None),
                    Err(e) => (None, Some(e.to_string())),
                };
                out.push(SlopeRow {
                    varied: varied.clone(),
                    s: s.to_string(),
                    basepoint: name,
                    points: pts.len(),
                    in_bracket: fit.is_some_and(|f| bracket.contains(f.slope)),
                    fit,
                    bracket,
                    error,
                });
            }
        }
    }
    out
}

/// Runs the sweep on the current rayon pool. Rows come in config order:
/// varied label, grid value, `s`, basepoint.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport, ExperimentError> {
    let spec = config.validate()?;
    let points = grid(config, &spec)?;
    let rows: Vec<SweepRow> = points.par_iter().flat_map_iter(|p| point_rows(p, config)).collect();
    let fits = fits(config, &spec, &rows);
    let report = SweepReport { family: spec.name.clone(), rows, fits };
    if let Some(path) = &config.output_path {
        report.write_files(Path::new(path))?;
    }
    Ok(report)
}

/// [`run_sweep`] on a pool of `threads` workers.
pub fn run_sweep_with_threads(config: &SweepConfig, threads: usize) -> Result<SweepReport, ExperimentError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| ExperimentError::InvalidConfig(format!("thread pool: {e}")))?;
    pool.install(|| run_sweep(config))
}
