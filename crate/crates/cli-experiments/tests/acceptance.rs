//! Acceptance criteria, one PASS/FAIL line each with its runtime.

use std::collections::BTreeMap;
use std::error::Error;
use std::time::{Duration, Instant};

use cli_experiments::verify::MODULAR_AT_I;
use cli_experiments::{run_sweep, run_sweep_with_threads, FamilySource, SweepConfig, SweepReport, CSV_COLUMNS};
use eisenstein::{
    eisenstein_eval_with, modular_oracle, pde_residual_with, EvalOptions, SpectralParameter, PDE_REL_TOL,
};
use fuchsian_enum::{counting_functions, orbit_separation, packing_constant, Enumerator, GroupPresentation};
use hyperbolic_core::{collar_half_width, CollarSpec, UpperHalfPoint};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use surface_families::{
    basepoint, glue_chain, short_elliptics, systole, trace_contracts, BasepointSpec, ChainFamilySpec, FamilyInstance,
    ELLIPTIC_WORD_LENGTH, FAMILY_A, FAMILY_B, SYSTOLE_WORD_LENGTH,
};

type Res<T> = Result<T, Box<dyn Error + Send + Sync>>;

fn p(re: f64, im: f64) -> UpperHalfPoint {
    UpperHalfPoint { re, im }
}

fn s(x: f64) -> SpectralParameter {
    SpectralParameter::real(x).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

/// A fixed shuffle of `n` generators, never the identity.
fn shuffled_order(n: usize) -> Vec<usize> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    let mut order: Vec<usize> = (0..n).collect();
    while order.iter().enumerate().all(|(k, &i)| k == i) {
        order.shuffle(&mut rng);
    }
    order
}

/// Groups with the basepoints the counting criteria use.
struct Counted {
    name: &'static str,
    group: GroupPresentation,
    points: Vec<UpperHalfPoint>,
}

fn counted() -> Res<Vec<Counted>> {
    let a = glue_chain(&ChainFamilySpec::builtin(FAMILY_A).unwrap())?;
    let b = glue_chain(&ChainFamilySpec::builtin(FAMILY_B).unwrap())?;
    let collar = |inst: &FamilyInstance, c: &str, side: &str| basepoint(inst, &BasepointSpec::collar(c, 0.5, side));
    Ok(vec![
        Counted { name: "modular", group: GroupPresentation::modular(), points: vec![p(0.25, 1.4), p(-0.35, 1.3)] },
        Counted {
            name: FAMILY_A,
            points: vec![collar(&a, "gamma1", "S2")?, collar(&a, "gamma1", "S1")?],
            group: a.group,
        },
        Counted {
            name: FAMILY_B,
            points: vec![collar(&b, "gamma1", "S2")?, collar(&b, "gamma2", "S3")?],
            group: b.group,
        },
    ])
}

const TABLE_RADIUS: f64 = 10.0;

fn sample_radii() -> Vec<f64> {
    (0..=100).map(|k| 8.0 * k as f64 / 100.0).collect()
}

fn criterion_1(en: &Enumerator) -> Res<(bool, String)> {
    let opts = EvalOptions::default();
    let z = p(0.2, 0.3);
    let e = eisenstein_eval_with(en, z, s(2.0), 1e-8, &opts)?.value.re;
    let o = modular_oracle(z, s(2.0), 5000)?.value.re;
    let ei = eisenstein_eval_with(en, UpperHalfPoint::I, s(2.0), 1e-7, &opts)?.value.re;
    let oi = modular_oracle(UpperHalfPoint::I, s(2.0), 5000)?.value.re;
    let (d, di, dq) = (rel(e, o), rel(ei, MODULAR_AT_I), rel(oi, MODULAR_AT_I));
    Ok((
        d <= 2e-8 && di <= 1e-6 && dq <= 1e-6,
        format!("eval vs oracle {d:.1e} at 0.2+0.3i; at i eval {di:.1e}, oracle {dq:.1e} from 30G/pi^2"),
    ))
}

fn criterion_2(cases: &[Counted]) -> Res<(bool, String)> {
    let mut checked = 0;
    for c in cases {
        let en = Enumerator::new(&c.group, Default::default())?;
        for &z in &c.points {
            let table = en.enumerate(z, TABLE_RADIUS)?;
            if !table.complete {
                return Ok((false, format!("{} table at {z} incomplete", c.name)));
            }
            for t in sample_radii() {
                let (pz, ph) = counting_functions(&table, t)?;
                let (pz1, _) = counting_functions(&table, t + 1.0)?;
                if !(pz <= ph && ph <= pz1) {
                    return Ok((false, format!("{} at {z}, t = {t}: {pz} {ph} {pz1}", c.name)));
                }
                checked += 1;
            }
        }
    }
    Ok((true, format!("{checked} radii over {} tables", cases.len() * 2)))
}

fn criterion_3(cases: &[Counted]) -> Res<(bool, String)> {
    let eps = 0.3;
    let u = packing_constant(eps)?;
    let mut worst = 0.0f64;
    let mut extra =
        [Counted { name: "gamma2", group: GroupPresentation::gamma2_normalized(), points: vec![p(0.3, 0.6)] }];
    let all: Vec<&Counted> = cases.iter().chain(extra.iter_mut().map(|c| &*c)).collect();
    for c in all {
        let en = Enumerator::new(&c.group, Default::default())?;
        for &z in &c.points {
            let sep = orbit_separation(&en, z, eps)?;
            if !sep.disjoint {
                return Ok((false, format!("{} at {z}: orbit distance {:.3} < 2 eps", c.name, sep.min_distance)));
            }
            let table = en.enumerate(z, TABLE_RADIUS)?;
            for t in sample_radii() {
                let (pz, _) = counting_functions(&table, t)?;
                worst = worst.max(pz as f64 / u.bound(t));
            }
        }
    }
    Ok((worst <= 1.0, format!("max count / U e^t = {worst:.3e}, U = {:.3}", u.u)))
}

fn pde_points() -> Res<Vec<(String, GroupPresentation, Vec<UpperHalfPoint>)>> {
    let modular: Vec<UpperHalfPoint> =
        [0.6, 1.1].iter().flat_map(|&y| [-0.4, -0.15, 0.1, 0.35].map(|x| p(x, y))).collect();
    let family: Vec<UpperHalfPoint> = [0.6, 1.0].iter().flat_map(|&y| [-0.3, 0.0, 0.3].map(|x| p(x, y))).collect();
    let mut out = vec![("modular".to_string(), GroupPresentation::modular(), modular)];
    for l in [0.5, 0.25] {
        let inst = glue_chain(&ChainFamilySpec::family_a(l))?;
        out.push((format!("{FAMILY_A} L={l}"), inst.group, family.clone()));
    }
    Ok(out)
}

fn pde_residuals(groups: &[(String, GroupPresentation, Vec<UpperHalfPoint>)]) -> Res<Vec<f64>> {
    let opts = EvalOptions::default();
    let mut out = Vec::new();
    for (_, g, pts) in groups {
        let en = Enumerator::new(g, opts.enumeration)?;
        for &z in pts {
            for sv in [2.0, 3.0] {
                out.push(pde_residual_with(&en, z, s(sv), 1e-3, PDE_REL_TOL, &opts)?);
            }
        }
    }
    Ok(out)
}

fn criterion_4(groups: &[(String, GroupPresentation, Vec<UpperHalfPoint>)]) -> Res<(bool, String)> {
    let r = pde_residuals(groups)?;
    let worst = r.iter().copied().fold(0.0, f64::max);
    let points: usize = groups.iter().map(|g| g.2.len()).sum();
    Ok((worst <= 1e-4, format!("max residual {worst:.2e} over {points} points, s in {{2, 3}}")))
}

fn criterion_5() -> Res<(bool, String)> {
    let mut worst = 0.0f64;
    for l in [0.5, 0.25, 0.1, 0.05] {
        let w = collar_half_width(CollarSpec::new(l, 1.0))?;
        worst = worst.max((w + l.ln() - 2.0 * 2f64.ln()).abs() / (0.3 * l * l));
    }
    Ok((worst <= 1.0, format!("max |w + log L - 2 log 2| / 0.3 L^2 = {worst:.3}")))
}

fn family_a_sweep() -> SweepConfig {
    SweepConfig {
        family: FamilySource::Name(FAMILY_A.into()),
        l_grid: BTreeMap::from([("gamma1".into(), vec![0.5, 0.35, 0.25, 0.18, 0.12])]),
        fixed: BTreeMap::new(),
        s_values: vec![s(2.0)],
        basepoints: vec![BasepointSpec::thick("S2"), BasepointSpec::collar("gamma1", 0.0, "S2")],
        rel_tol: 1e-4,
        output_path: None,
        generator_order: None,
    }
}

fn family_b_sweep() -> SweepConfig {
    let grid = vec![0.5, 0.35, 0.25, 0.18];
    SweepConfig {
        family: FamilySource::Name(FAMILY_B.into()),
        l_grid: BTreeMap::from([("gamma1".into(), grid.clone()), ("gamma2".into(), grid)]),
        fixed: BTreeMap::from([("gamma1".into(), 0.35), ("gamma2".into(), 0.35)]),
        s_values: vec![s(2.0)],
        basepoints: vec![BasepointSpec::thick("S3")],
        rel_tol: 1e-4,
        output_path: None,
        generator_order: None,
    }
}

/// Checks the fitted slope of `(varied, basepoint)` against `[lo, hi]`.
fn slopes(report: &SweepReport, want: &[(&str, &str, f64, f64)]) -> (bool, String) {
    let mut ok = report.failed_rows() == 0;
    let mut parts = Vec::new();
    if !ok {
        parts.push(format!("{} failed rows", report.failed_rows()));
    }
    for &(varied, bp, lo, hi) in want {
        let fit = report.fits.iter().find(|f| f.varied == varied && f.basepoint == bp).and_then(|f| f.fit);
        match fit {
            Some(f) => {
                let inside = (lo..=hi).contains(&f.slope);
                ok &= inside;
                parts.push(format!("{varied} at {bp}: {:.3} ± {:.3} in [{lo}, {hi}]", f.slope, f.stderr));
            }
            None => {
                ok = false;
                parts.push(format!("{varied} at {bp}: no fit"));
            }
        }
    }
    (ok, parts.join("; "))
}

fn criterion_8(reports: &[&SweepReport]) -> Res<(bool, String)> {
    let mut specs: Vec<ChainFamilySpec> =
        [FAMILY_A, FAMILY_B].iter().map(|n| ChainFamilySpec::builtin(n).unwrap()).collect();
    let builtins = specs.len();
    for r in reports {
        for row in &r.rows {
            let spec = ChainFamilySpec::builtin(&row.family).unwrap();
            let mut spec = spec.with_length(&row.varied, row.varied_length)?;
            if row.family == FAMILY_B {
                let other = if row.varied == "gamma1" { "gamma2" } else { "gamma1" };
                spec.set_length(other, 0.35)?;
            }
            if !specs.contains(&spec) {
                specs.push(spec);
            }
        }
    }
    let mut bad = Vec::new();
    for (k, spec) in specs.iter().enumerate() {
        let inst = glue_chain(spec)?;
        let tag = format!("{} {:?}", spec.name, inst.lengths.values().collect::<Vec<_>>());
        for c in trace_contracts(&inst).iter().filter(|c| !c.pass) {
            bad.push(format!("{tag}: {} {:.1e}", c.name, c.value));
        }
        let (sys, _) = systole(&inst.group, SYSTOLE_WORD_LENGTH);
        let shortest = inst.lengths.values().copied().fold(f64::INFINITY, f64::min);
        if (sys - shortest).abs() > 1e-9 {
            bad.push(format!("{tag}: systole {sys} vs {shortest}"));
        }
        if k < builtins && !short_elliptics(&inst.group, ELLIPTIC_WORD_LENGTH, 1).is_empty() {
            bad.push(format!("{tag}: elliptic word"));
        }
    }
    let detail = format!(
        "{} instances, contracts and systole; no elliptics up to length {ELLIPTIC_WORD_LENGTH} on the builtins",
        specs.len()
    );
    Ok((bad.is_empty(), if bad.is_empty() { detail } else { bad.join("; ") }))
}

fn csv_rows(r: &SweepReport) -> Vec<Vec<String>> {
    let col = CSV_COLUMNS.iter().position(|&c| c == "runtime_ms").unwrap();
    r.rows
        .iter()
        .map(|row| {
            let mut f = row.fields();
            f.remove(col);
            f
        })
        .collect()
}

fn coset_set(g: &GroupPresentation, z: UpperHalfPoint) -> Res<Vec<(u64, u64)>> {
    let table = Enumerator::new(g, Default::default())?.enumerate(z, TABLE_RADIUS)?;
    let mut rows: Vec<(u64, u64)> =
        table.records.iter().map(|r| (r.bottom_row.0.to_bits(), r.bottom_row.1.to_bits())).collect();
    rows.sort_unstable();
    Ok(rows)
}

struct Baseline {
    cosets: Vec<Vec<(u64, u64)>>,
    oracle: f64,
    pde: Vec<f64>,
    sweeps: Vec<Vec<Vec<String>>>,
}

fn criterion_9(
    cases: &[Counted],
    pde: &[(String, GroupPresentation, Vec<UpperHalfPoint>)],
    base: &Baseline,
) -> Res<(bool, String)> {
    let mut diffs = Vec::new();
    for threads in [1, 8] {
        let pool = pool(threads);
        let shuffle = |g: &GroupPresentation| g.permuted(&shuffled_order(g.generators.len()));
        let mut k = 0;
        for c in cases {
            let g = shuffle(&c.group);
            for &z in &c.points {
                if pool.install(|| coset_set(&g, z))? != base.cosets[k] {
                    diffs.push(format!("{} cosets at {z} with {threads} threads", c.name));
                }
                k += 1;
            }
        }
        let g = shuffle(&GroupPresentation::modular());
        let en = Enumerator::new(&g, Default::default())?;
        let e = pool.install(|| eisenstein_eval_with(&en, p(0.2, 0.3), s(2.0), 1e-8, &EvalOptions::default()))?;
        if e.value.re != base.oracle {
            diffs.push(format!("modular E with {threads} threads: {} vs {}", e.value.re, base.oracle));
        }
        let shuffled: Vec<_> = pde.iter().map(|(n, g, pts)| (n.clone(), shuffle(g), pts.clone())).collect();
        if pool.install(|| pde_residuals(&shuffled))? != base.pde {
            diffs.push(format!("eigen-equation residuals with {threads} threads"));
        }
        for (cfg, want) in [family_a_sweep(), family_b_sweep()].into_iter().zip(&base.sweeps) {
            let spec = cfg.family.resolve()?;
            let n = glue_chain(&spec)?.group.generators.len();
            let cfg = SweepConfig { generator_order: Some(shuffled_order(n)), ..cfg };
            if &csv_rows(&run_sweep_with_threads(&cfg, threads)?) != want {
                diffs.push(format!("{} CSV rows with {threads} threads", spec.name));
            }
        }
    }
    let detail =
        "coset sets, E, eigen-equation residuals and sweep CSV rows under shuffled generators, 1 and 8 threads";
    Ok((diffs.is_empty(), if diffs.is_empty() { detail.to_string() } else { diffs.join("; ") }))
}

struct Harness {
    failed: Vec<usize>,
}

impl Harness {
    fn run(&mut self, n: usize, name: &str, limit: Duration, f: impl FnOnce() -> Res<(bool, String)>) {
        let t = Instant::now();
        let (ok, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        let dt = t.elapsed();
        let ok = ok && dt <= limit;
        println!(
            "{} {n} {name}: {detail} ({:.1} s, limit {} s)",
            if ok { "PASS" } else { "FAIL" },
            dt.as_secs_f64(),
            limit.as_secs()
        );
        if !ok {
            self.failed.push(n);
        }
    }
}

fn main() {
    let secs = Duration::from_secs;
    let mut h = Harness { failed: Vec::new() };
    let modular = Enumerator::new(&GroupPresentation::modular(), Default::default()).unwrap();
    let cases = counted().expect("builtin families build");
    let pde = pde_points().expect("builtin families build");

    h.run(1, "oracle equivalence", secs(30), || criterion_1(&modular));
    h.run(2, "counting sandwich", secs(60), || criterion_2(&cases));
    h.run(3, "packing bound", secs(60), || criterion_3(&cases));
    h.run(4, "eigen-equation", secs(300), || criterion_4(&pde));
    h.run(5, "collar asymptote", secs(1), criterion_5);
    let mut a = None;
    h.run(6, "one-curve exponent brackets", secs(900), || {
        let r = run_sweep(&family_a_sweep())?;
        let out = slopes(&r, &[("gamma1", "thick:S2", 1.85, 4.15), ("gamma1", "collar:gamma1:0:S2", 0.85, 2.15)]);
        a = Some(r);
        Ok(out)
    });
    let mut b = None;
    h.run(7, "two-curve exponent brackets", secs(1800), || {
        let r = run_sweep(&family_b_sweep())?;
        let out = slopes(&r, &[("gamma2", "thick:S3", 1.85, 4.15), ("gamma1", "thick:S3", 1.85, 4.15)]);
        b = Some(r);
        Ok(out)
    });
    h.run(8, "construction contracts", secs(120), || {
        criterion_8(&[a.as_ref(), b.as_ref()].into_iter().flatten().collect::<Vec<_>>())
    });
    h.run(9, "determinism", secs(3600), || {
        let mut cosets = Vec::new();
        for c in &cases {
            for &z in &c.points {
                cosets.push(coset_set(&c.group, z)?);
            }
        }
        let oracle = eisenstein_eval_with(&modular, p(0.2, 0.3), s(2.0), 1e-8, &EvalOptions::default())?.value.re;
        let sweeps = [a.as_ref(), b.as_ref()]
            .into_iter()
            .map(|r| r.map(csv_rows).ok_or("sweep did not run"))
            .collect::<Result<Vec<_>, _>>()?;
        let base = Baseline { cosets, oracle, pde: pde_residuals(&pde)?, sweeps };
        criterion_9(&cases, &pde, &base)
    });

    if h.failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing {:?}", h.failed);
        std::process::exit(1);
    }
}
