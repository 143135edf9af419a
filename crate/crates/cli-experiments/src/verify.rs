use std::fmt::Write as _;

use eisenstein::{
    eisenstein_eval_with, modular_oracle, pde_residual_with, EvalOptions, SpectralParameter, PDE_REL_TOL,
};
use fuchsian_enum::{counting_functions, orbit_separation, packing_constant, Enumerator, GroupPresentation};
use hyperbolic_core::{collar_half_width, CollarSpec, UpperHalfPoint};
use serde::{Deserialize, Serialize};
use surface_families::{
    basepoint, glue_chain, short_elliptics, systole, trace_contracts, BasepointSpec, FamilyInstance,
    ELLIPTIC_WORD_LENGTH, SYSTOLE_WORD_LENGTH,
};

use crate::{ExperimentError, FamilySource};

/// `2ζ(2)β(2)/ζ(4) = 30G/π²`, the modular Eisenstein series at `z = i`,
/// `s = 2`, with `G` Catalan's constant.
pub const MODULAR_AT_I: f64 = 30.0 * 0.915_965_594_177_219_f64 / (std::f64::consts::PI * std::f64::consts::PI);

pub const MODULAR: &str = "modular";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyOptions {
    /// Ball radius of the packing bound.
    pub epsilon: f64,
    pub modular: bool,
    pub families: Vec<FamilySource>,
    /// Groups whose first generator gets its determinant pushed off 1.
    pub corrupt_determinant: Vec<String>,
    pub elliptic_word_length: usize,
    /// Sampled radii per counting check.
    pub samples: usize,
    /// Tolerance of the oracle comparison on the modular group.
    pub oracle_rel_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            epsilon: 0.3,
            modular: true,
            families: vec![FamilySource::Name(surface_families::FAMILY_A.into())],
            corrupt_determinant: Vec::new(),
            elliptic_word_length: ELLIPTIC_WORD_LENGTH,
            samples: 100,
            oracle_rel_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantLine {
    pub group: String,
    pub name: String,
    pub status: CheckStatus,
    /// Measured quantity; passing means `value ≤ limit`.
    pub value: f64,
    pub limit: f64,
    pub detail: String,
}

impl InvariantLine {
    pub fn margin(&self) -> f64 {
        self.limit - self.value
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub lines: Vec<InvariantLine>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.status != CheckStatus::Fail)
    }

    pub fn line(&self, group: &str, name: &str) -> Option<&InvariantLine> {
        self.lines.iter().find(|l| l.group == group && l.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            let tag = match l.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skipped => "SKIP",
            };
            let _ = write!(out, "{tag} {:<10} {:<28}", l.group, l.name);
            if l.status != CheckStatus::Skipped {
                let _ = write!(out, " {:.3e} <= {:.1e} margin {:.3e}", l.value, l.limit, l.margin());
            }
            if !l.detail.is_empty() {
                let _ = write!(out, " ({})", l.detail);
            }
            out.push('\n');
        }
        let _ = writeln!(out, "{}", if self.passed() { "verify: pass" } else { "verify: FAIL" });
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data") + "\n"
    }
}

/// Lines of one group; once a gate fails, later checks are skipped.
struct Battery<'a> {
    group: String,
    lines: &'a mut Vec<InvariantLine>,
    blocked: Option<String>,
}

impl Battery<'_> {
    fn push(&mut self, name: &str, status: CheckStatus, value: f64, limit: f64, detail: String) {
        self.lines.push(InvariantLine { group: self.group.clone(), name: name.into(), status, value, limit, detail });
    }

    /// Runs `f` unless blocked; `f` returns `(value, limit, detail)`.
    fn check(&mut self, name: &str, f: impl FnOnce() -> Result<(f64, f64, String), ExperimentError>) -> bool {
        if let Some(why) = &self.blocked {
            let why = why.clone();
            self.push(name, CheckStatus::Skipped, f64::NAN, f64::NAN, why);
            return false;
        }
        match f() {
            Ok((value, limit, detail)) => {
                let pass = value <= limit;
                self.push(name, if pass { CheckStatus::Pass } else { CheckStatus::Fail }, value, limit, detail);
                pass
            }
            Err(e) => {
                self.push(name, CheckStatus::Fail, f64::NAN, f64::NAN, e.to_string());
                false
            }
        }
    }

    fn gate(&mut self, name: &str, f: impl FnOnce() -> Result<(f64, f64, String), ExperimentError>) {
        if !self.check(name, f) && self.blocked.is_none() {
            self.blocked = Some(format!("{name} failed"));
        }
    }
}

/// Scales the first generator so its determinant is `1 + 2e-6`.
fn corrupt(g: &mut GroupPresentation) {
    let m = &mut g.generators[0].matrix;
    for x in [&mut m.a, &mut m.b, &mut m.c, &mut m.d] {
        *x *= 1.0 + 1e-6;
    }
}

fn det_defect(g: &GroupPresentation) -> f64 {
    g.generators.iter().map(|x| (x.matrix.det() - 1.0).abs() / x.matrix.max_abs().powi(2).max(1.0)).fold(0.0, f64::max)
}

fn p(re: f64, im: f64) -> UpperHalfPoint {
    UpperHalfPoint { re, im }
}

struct Case {
    name: String,
    group: GroupPresentation,
    instance: Option<FamilyInstance>,
    /// Basepoint of the counting checks.
    count_at: UpperHalfPoint,
    /// Points of the eigen-equation check; the stencil error grows like
    /// `(step/y)²`, so these sit well above the real axis.
    pde_at: Vec<UpperHalfPoint>,
}

fn run_case(case: &Case, opts: &VerifyOptions, lines: &mut Vec<InvariantLine>) {
    let mut b = Battery { group: case.name.clone(), lines, blocked: None };
    let g = &case.group;
    b.gate("unit determinants", || Ok((det_defect(g), 1e-12, String::new())));
    if let Some(inst) = &case.instance {
        let mut inst = inst.clone();
        inst.group = g.clone();
        for c in trace_contracts(&inst) {
            if c.name == "unit determinants" {
                continue;
            }
            b.check(&format!("contract {}", c.name), || Ok((c.value, c.limit, String::new())));
        }
        b.check("systole", || {
            let (sys, w) = systole(g, SYSTOLE_WORD_LENGTH);
            let shortest = inst.lengths.values().copied().fold(f64::INFINITY, f64::min);
            Ok(((sys - shortest).abs(), 1e-9, format!("{sys:.12} at {}", w.display(g))))
        });
        b.check("no short elliptics", || {
            let e = short_elliptics(g, opts.elliptic_word_length, 1);
            let detail = e.first().map(|w| w.display(g).to_string()).unwrap_or_default();
            Ok((e.len() as f64, 0.0, format!("words up to {}{detail}", opts.elliptic_word_length)))
        });
    }
    let opts_e = EvalOptions::default();
    let en = match Enumerator::new(g, opts_e.enumeration) {
        Ok(en) => Some(en),
        Err(e) => {
            b.gate("ford domain", || Err(e.into()));
            None
        }
    };
    let Some(en) = en else { return };
    b.gate("ford domain", || {
        let d = &en.domain;
        let area = g.covolume.map_or(0.0, |c| (d.area - c).abs() / c);
        let value = if d.certified { area } else { f64::INFINITY };
        Ok((value, en.opts.ford.area_rel_tol, format!("{} sides", d.circles.len())))
    });
    let z = case.count_at;
    let radius = 10.0;
    let table = en.enumerate(z, radius);
    let ts: Vec<f64> = (0..=opts.samples).map(|k| 8.0 * k as f64 / opts.samples.max(1) as f64).collect();
    b.check("counting sandwich", || {
        let table = table.as_ref().map_err(|e| ExperimentError::Enumeration(e.clone()))?;
        let mut bad = 0;
        for &t in &ts {
            let (pz, ph) = counting_functions(table, t)?;
            let (pz1, _) = counting_functions(table, t + 1.0)?;
            bad += usize::from(!(pz <= ph && ph <= pz1));
        }
        Ok((bad as f64, 0.0, format!("{} radii at {z}", ts.len())))
    });
    let eps = opts.epsilon;
    let disjoint = b.check("ball disjointness", || {
        let sep = orbit_separation(&en, z, eps)?;
        let detail = format!("min orbit distance {:.4} for eps {eps}", sep.min_distance);
        // the distance is capped at 2ε, so disjoint balls pass with zero margin
        Ok((2.0 * eps, sep.min_distance, detail))
    });
    if !disjoint && b.blocked.is_none() {
        b.push("packing bound", CheckStatus::Skipped, f64::NAN, f64::NAN, "balls are not disjoint".into());
    } else {
        b.check("packing bound", || {
            let table = table.as_ref().map_err(|e| ExperimentError::Enumeration(e.clone()))?;
            let u = packing_constant(eps)?;
            let mut worst = 0.0f64;
            for &t in &ts {
                let (pz, _) = counting_functions(table, t)?;
                worst = worst.max(pz as f64 / u.bound(t));
            }
            Ok((worst, 1.0, format!("max of count / U e^t, U = {:.4}", u.u)))
        });
    }
    b.check("eigen-equation", || {
        let mut worst = 0.0f64;
        for &w in &case.pde_at {
            for s in [2.0, 3.0] {
                let s = SpectralParameter::real(s)?;
                worst = worst.max(pde_residual_with(&en, w, s, 1e-3, PDE_REL_TOL, &opts_e)?);
            }
        }
        Ok((worst, 1e-4, format!("{} points, s in {{2, 3}}, step 1e-3", case.pde_at.len())))
    });
    if case.name == MODULAR {
        let s = SpectralParameter::real(2.0).expect("s = 2");
        b.check("oracle agreement", || {
            let w = p(0.2, 0.3);
            let e = eisenstein_eval_with(&en, w, s, opts.oracle_rel_tol, &opts_e)?.value.re;
            let o = modular_oracle(w, s, 5000)?.value.re;
            Ok(((e - o).abs() / o, 2.0 * opts.oracle_rel_tol, format!("at {w}")))
        });
        b.check("closed form at i", || {
            let e = eisenstein_eval_with(&en, UpperHalfPoint::I, s, 1e-7, &opts_e)?.value.re;
            Ok(((e - MODULAR_AT_I).abs() / MODULAR_AT_I, 1e-6, format!("{e:.9}")))
        });
    }
}

fn family_case(src: &FamilySource, corrupt_names: &[String]) -> Result<Case, (String, ExperimentError)> {
    let spec = src.resolve().map_err(|e| (format!("{src:?}"), e))?;
    let fail = |e: surface_families::FamilyError| (spec.name.clone(), ExperimentError::from(e));
    let inst = glue_chain(&spec).map_err(fail)?;
    let mut group = inst.group.clone();
    if corrupt_names.contains(&spec.name) {
        corrupt(&mut group);
    }
    let first = &spec.pinching_labels[0].label;
    let count_at = basepoint(&inst, &BasepointSpec::collar(first, 0.5, "S2")).map_err(fail)?;
    let pde_at = vec![p(0.3, 1.0), p(0.1, 0.6)];
    Ok(Case { name: spec.name.clone(), group, instance: Some(inst), count_at, pde_at })
}

/// Runs the invariant battery. Failures are report lines, never errors.
pub fn verify_suite(opts: &VerifyOptions) -> VerifyReport {
    let mut lines = Vec::new();
    {
        let mut b = Battery { group: "geometry".into(), lines: &mut lines, blocked: None };
        b.check("collar asymptote", || {
            let mut worst = 0.0f64;
            for l in [0.5, 0.25, 0.1, 0.05] {
                let w = collar_half_width(CollarSpec::new(l, 1.0))
                    .map_err(|e| ExperimentError::InvalidConfig(e.to_string()))?;
                worst = worst.max((w + l.ln() - 2.0 * 2f64.ln()).abs() / (0.3 * l * l));
            }
            Ok((worst, 1.0, "|w + log L - 2 log 2| / 0.3 L^2".into()))
        });
    }
    if opts.modular {
        let mut group = GroupPresentation::modular();
        if opts.corrupt_determinant.iter().any(|n| n == MODULAR) {
            corrupt(&mut group);
        }
        let case = Case {
            name: MODULAR.into(),
            group,
            instance: None,
            count_at: p(0.25, 1.4),
            pde_at: vec![p(0.45, 0.9), p(0.2, 0.6)],
        };
        run_case(&case, opts, &mut lines);
    }
    for src in &opts.families {
        match family_case(src, &opts.corrupt_determinant) {
            Ok(case) => run_case(&case, opts, &mut lines),
            Err((group, e)) => lines.push(InvariantLine {
                group,
                name: "construction".into(),
                status: CheckStatus::Fail,
                value: f64::NAN,
                limit: f64::NAN,
                detail: e.to_string(),
            }),
        }
    }
    VerifyReport { lines }
}
