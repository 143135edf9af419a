use std::collections::BTreeMap;
use std::process::Command;

use cli_experiments::*;
use eisenstein::SpectralParameter;
use surface_families::{BasepointSpec, FAMILY_A};

fn small_sweep(basepoints: Vec<BasepointSpec>) -> SweepConfig {
    SweepConfig {
        family: FamilySource::Name(FAMILY_A.into()),
        l_grid: BTreeMap::from([("gamma1".to_string(), vec![0.5, 0.4, 0.3, 0.25])]),
        fixed: BTreeMap::new(),
        s_values: vec![SpectralParameter::real(2.0).unwrap()],
        basepoints,
        rel_tol: 1e-3,
        output_path: None,
        generator_order: None,
    }
}

fn without_runtime(r: &SweepReport) -> Vec<Vec<String>> {
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

#[test]
fn perturbed_line_recovers_its_slope() {
    // alternating ±1e-3 on an exact line of slope 2.5
    let pts: Vec<(f64, f64)> = (0..8)
        .map(|k| {
            let x = -2.5 + 0.2 * k as f64;
            (x, 2.5 * x - 1.0 + if k % 2 == 0 { 1e-3 } else { -1e-3 })
        })
        .collect();
    let f = fit_slope(&pts).unwrap();
    assert!((f.slope - 2.5).abs() < 0.01, "{f:?}");
    assert!(f.stderr > 0.0 && f.stderr < 0.01);
}

#[test]
fn empty_grid_is_rejected() {
    let mut c = small_sweep(vec![BasepointSpec::thick("S2")]);
    c.l_grid.clear();
    assert!(matches!(run_sweep(&c), Err(ExperimentError::InvalidConfig(_))));
}

#[test]
fn failed_rows_are_kept() {
    let c = small_sweep(vec![BasepointSpec::thick("S2"), BasepointSpec::thick("S9")]);
    let r = run_sweep(&c).unwrap();
    assert_eq!(r.rows.len(), 4 * 2);
    assert_eq!(r.failed_rows(), 4);
    for row in &r.rows {
        assert_eq!(row.failed(), row.basepoint == "thick:S9", "{row:?}");
    }
    let csv = r.csv_string();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "family,L1,L2,s_re,s_im,basepoint,k,z_re,z_im,E_re,E_im,tail,T_trunc,n_cosets,runtime_ms,status"
    );
    assert_eq!(lines.count(), 8);
    assert_eq!(r.fits.len(), 1);
    let f = &r.fits[0];
    assert_eq!(f.points, 4);
    assert!(f.in_bracket, "{f:?}");
}

#[test]
fn sweep_is_independent_of_threads_and_generator_order() {
    let c = small_sweep(vec![BasepointSpec::thick("S2"), BasepointSpec::collar("gamma1", 0.0, "S2")]);
    let a = run_sweep_with_threads(&c, 1).unwrap();
    let mut shuffled = c.clone();
    shuffled.generator_order = Some(vec![2, 0, 1]);
    let b = run_sweep_with_threads(&shuffled, 4).unwrap();
    assert_eq!(without_runtime(&a), without_runtime(&b));
    assert_eq!(a.fits_json(), b.fits_json());
}

#[test]
fn sweep_writes_csv_and_fits() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = small_sweep(vec![BasepointSpec::thick("S2")]);
    let path = dir.path().join("out.csv");
    c.output_path = Some(path.display().to_string());
    let r = run_sweep(&c).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), r.csv_string());
    assert_eq!(std::fs::read_to_string(dir.path().join("out.fits.json")).unwrap(), r.fits_json());
}

fn modular_only() -> VerifyOptions {
    VerifyOptions { families: vec![], oracle_rel_tol: 1e-6, ..Default::default() }
}

#[test]
fn determinant_fault_skips_the_rest_of_the_group() {
    let opts = VerifyOptions { corrupt_determinant: vec!["modular".into()], ..modular_only() };
    let r = verify_suite(&opts);
    assert!(!r.passed());
    let modular: Vec<&InvariantLine> = r.lines.iter().filter(|l| l.group == "modular").collect();
    assert_eq!(modular[0].name, "unit determinants");
    assert_eq!(modular[0].status, CheckStatus::Fail);
    assert!(modular.len() > 3);
    assert!(modular[1..].iter().all(|l| l.status == CheckStatus::Skipped), "{}", r.to_text());
    assert_eq!(r.line("geometry", "collar asymptote").unwrap().status, CheckStatus::Pass);
}

#[test]
fn large_epsilon_skips_the_packing_bound() {
    let r = verify_suite(&VerifyOptions { epsilon: 2.0, ..modular_only() });
    assert_eq!(r.line("modular", "ball disjointness").unwrap().status, CheckStatus::Fail);
    assert_eq!(r.line("modular", "packing bound").unwrap().status, CheckStatus::Skipped);
    assert_eq!(r.line("modular", "counting sandwich").unwrap().status, CheckStatus::Pass);
}

#[test]
fn verify_reports_are_byte_identical() {
    let a = verify_suite(&modular_only());
    assert!(a.passed(), "{}", a.to_text());
    let b = verify_suite(&modular_only());
    assert_eq!(a.to_text(), b.to_text());
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let pinch = env!("CARGO_BIN_EXE_pinch");
    let write = |name: &str, text: String| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    };
    let good = write("good.json", serde_json::to_string(&small_sweep(vec![BasepointSpec::thick("S2")])).unwrap());
    let bad = write(
        "bad.json",
        serde_json::to_string(&small_sweep(vec![BasepointSpec::thick("S2"), BasepointSpec::thick("S9")])).unwrap(),
    );
    let run = |args: &[&str]| Command::new(pinch).args(args).output().unwrap();

    let out = dir.path().join("rows.csv");
    let o = run(&["sweep", "--threads", "2", "--config", good.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 5);
    assert_eq!(run(&["sweep", "--config", bad.to_str().unwrap()]).status.code(), Some(2));

    let corrupt = write("verify.json", r#"{"families": [], "corrupt_determinant": ["modular"]}"#.into());
    let o = run(&["verify", "--config", corrupt.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.lines().any(|l| l.starts_with("FAIL modular") && l.contains("unit determinants")), "{text}");

    let o = run(&["eval", "--group", "modular", "--z", "0,1", "--rel-tol", "1e-6"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let e = v["E"][0].as_f64().unwrap();
    assert!((e - verify::MODULAR_AT_I).abs() < 1e-5 * e, "{e}");

    let o = run(&["count", "--family", "family-a", "--basepoint", "collar:gamma1:0.5:S2", "--t", "5"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let (pz, ph, pz1) = (v["pi_z"].as_u64().unwrap(), v["pi_h"].as_u64().unwrap(), v["pi_z_next"].as_u64().unwrap());
    assert!(pz <= ph && ph <= pz1);

    assert!(!run(&["eval", "--group", "modular"]).status.success());
}
