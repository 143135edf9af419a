use eisenstein::{eisenstein_eval, SpectralParameter};
use fuchsian_enum::ford::{FordDomain, FordOptions};
use fuchsian_enum::{min_displacement, Word};
use hyperbolic_core::{collar_half_width, dist_to_imag_axis, hyp_distance, CollarSpec, Mobius, UpperHalfPoint};
use surface_families::*;

fn thick_threshold() -> f64 {
    2.0 * 1f64.asinh()
}

fn tr(m: &Mobius) -> f64 {
    m.a + m.d
}

fn mul(a: &Mobius, b: &Mobius) -> Mobius {
    Mobius::new(a.a * b.a + a.b * b.c, a.a * b.b + a.b * b.d, a.c * b.a + a.d * b.c, a.c * b.b + a.d * b.d)
}

#[test]
fn pants_boundary_traces() {
    use BoundaryDatum::*;
    let g = |l: f64| Geodesic { length: l };
    let cases = [[Cusp, Cusp, Cusp], [g(0.4), Cusp, Cusp], [g(0.3), g(1.1), Cusp], [g(0.2), g(0.7), g(2.5)]];
    for data in cases {
        let p = build_pants(data[0], data[1], data[2]).unwrap();
        for (b, m) in data.iter().zip(p.boundary()) {
            let want = match b {
                Cusp => 2.0,
                Geodesic { length } => 2.0 * (length / 2.0).cosh(),
            };
            assert!((tr(&m).abs() - want).abs() < 1e-9, "{data:?}: {} vs {want}", tr(&m));
        }
        // tr²X + tr²Y + tr²XY − trX trY trXY = tr[X,Y] + 2
        let (x, y) = (p.x, p.y);
        let xy = mul(&x, &y);
        let comm = mul(&mul(&x, &y), &mul(&x.inverse(), &y.inverse()));
        let lhs = tr(&x).powi(2) + tr(&y).powi(2) + tr(&xy).powi(2) - tr(&x) * tr(&y) * tr(&xy);
        assert!((lhs - tr(&comm) - 2.0).abs() < 1e-9 * lhs.abs().max(1.0), "{data:?}");
        assert!((x.det() - 1.0).abs() < 1e-12 && (y.det() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn glued_pants_have_four_cusps() {
    for l in [0.5, 0.35, 0.25, 0.18, 0.12] {
        let inst = glue_chain(&ChainFamilySpec::family_a(l)).unwrap();
        assert_eq!(inst.cusps.len(), 4);
        for label in &inst.cusps {
            let t = exact_trace(&inst.group, &inst.curve_words[label]);
            assert!((t.abs() - 2.0).abs() < 1e-9, "{label} at {l}: {t}");
        }
        let t = exact_trace(&inst.group, &inst.curve_words["gamma1"]).abs();
        assert!((2.0 * (t / 2.0).acosh() - l).abs() < 1e-9);
        assert!(inst.group.cusp_width_normalized);
    }
}

#[test]
fn builtin_contracts_hold() {
    for name in [FAMILY_A, FAMILY_B] {
        let inst = glue_chain(&ChainFamilySpec::builtin(name).unwrap()).unwrap();
        for c in trace_contracts(&inst) {
            assert!(c.pass, "{name}: {c:?}");
        }
    }
}

#[test]
fn two_curve_grid_contracts_hold() {
    for l in [0.5, 0.35, 0.25, 0.18] {
        for label in ["gamma1", "gamma2"] {
            let spec = ChainFamilySpec::family_b(0.35, 0.35).with_length(label, l).unwrap();
            let inst = glue_chain(&spec).unwrap();
            for c in trace_contracts(&inst) {
                assert!(c.pass, "{label} = {l}: {c:?}");
            }
        }
    }
}

#[test]
fn zero_and_negative_lengths_are_rejected() {
    for l in [0.0, -0.3] {
        assert!(matches!(glue_chain(&ChainFamilySpec::family_a(l)), Err(FamilyError::NonPositiveLength(_))));
    }
    let spec = ChainFamilySpec::family_b(0.35, 0.35).with_length("gamma2", 0.0).unwrap();
    assert!(matches!(glue_chain(&spec), Err(FamilyError::NonPositiveLength(_))));
}

#[test]
fn collar_points_round_trip() {
    let inst = glue_chain(&ChainFamilySpec::family_a(0.25)).unwrap();
    for side in ["S1", "S2"] {
        let z = basepoint(&inst, &BasepointSpec::collar("gamma1", 0.0, side)).unwrap();
        let w = collar_coordinates(&inst, "gamma1", z).unwrap();
        assert!(dist_to_imag_axis(w) < 1e-12, "{side}: {w}");
    }
    let want = collar_half_width(CollarSpec::new(0.25, 1.0)).unwrap();
    let z = basepoint(&inst, &BasepointSpec::collar("gamma1", 1.0, "S2")).unwrap();
    let w = collar_coordinates(&inst, "gamma1", z).unwrap();
    assert!((dist_to_imag_axis(w) - want).abs() < 1e-10);
    // the two sides lie on opposite sides of the core
    let other =
        collar_coordinates(&inst, "gamma1", basepoint(&inst, &BasepointSpec::collar("gamma1", 1.0, "S1")).unwrap())
            .unwrap();
    assert!(other.re * w.re < 0.0);
}

/// Smallest displacement over words of length ≤ `n`, an upper bound for
/// the true minimum.
fn brute_displacement(inst: &FamilyInstance, z: UpperHalfPoint, n: usize) -> f64 {
    let letters = inst.group.letters();
    let mut best = f64::INFINITY;
    let mut frontier = vec![(Mobius::IDENTITY, None::<fuchsian_enum::Letter>)];
    for _ in 0..n {
        let mut next = Vec::new();
        for (m, last) in &frontier {
            for &l in &letters {
                if last.is_some_and(|p| p.inv() == l) {
                    continue;
                }
                let w = m.compose_raw(&inst.group.letter_matrix(l));
                best = best.min(hyp_distance(z, w.apply(z)));
                next.push((w, Some(l)));
            }
        }
        frontier = next;
    }
    best
}

#[test]
fn thick_anchor_clears_the_threshold() {
    let inst = glue_chain(&ChainFamilySpec::family_a(0.2)).unwrap();
    let z = basepoint(&inst, &BasepointSpec::thick("S2")).unwrap();
    let d = min_displacement(&inst.group, z, 2.5).unwrap();
    assert!(d > thick_threshold(), "{d}");
    let brute = brute_displacement(&inst, z, 5);
    assert!(d <= brute + 1e-9, "{d} > {brute}");
}

#[test]
fn systole_is_the_shortest_pinching_length() {
    let cases = [
        ChainFamilySpec::family_a(0.25),
        ChainFamilySpec::family_a(0.12),
        ChainFamilySpec::family_b(0.35, 0.18),
        ChainFamilySpec::family_b(0.25, 0.35),
    ];
    for spec in cases {
        let inst = glue_chain(&spec).unwrap();
        let want = inst.lengths.values().fold(f64::INFINITY, |a, &b| a.min(b));
        let (sys, w) = systole(&inst.group, SYSTOLE_WORD_LENGTH);
        assert!((sys - want).abs() < 1e-6, "{sys} at {} vs {want}", w.display(&inst.group));
    }
}

#[test]
fn builtins_have_no_short_elliptics() {
    for name in [FAMILY_A, FAMILY_B] {
        let inst = glue_chain(&ChainFamilySpec::builtin(name).unwrap()).unwrap();
        let e = short_elliptics(&inst.group, ELLIPTIC_WORD_LENGTH, 1);
        assert!(e.is_empty(), "{name}: {}", e[0].display(&inst.group));
    }
}

/// The chain of `family_b(l, l)` listed from the far end, with the
/// Eisenstein cusp on what was the last pants.
fn reversed_chain(l: f64, slot: usize) -> ChainFamilySpec {
    use BoundaryDatum::Cusp;
    let g = BoundaryDatum::Geodesic { length: l };
    ChainFamilySpec {
        name: "reversed".into(),
        pants: vec![[g, Cusp, Cusp], [g, Cusp, g], [Cusp, Cusp, g]],
        gluings: vec![
            Gluing { pants: (0, 1), slots: (0, 2), twist: 0.0 },
            Gluing { pants: (1, 2), slots: (0, 2), twist: 0.0 },
        ],
        eisenstein_cusp: SlotRef { pants: 0, slot },
        pinching_labels: vec![
            PinchLabel { label: "gamma2".into(), gluing: 0 },
            PinchLabel { label: "gamma1".into(), gluing: 1 },
        ],
    }
}

/// Ford circle radii above `1e-4`, a conjugacy invariant of the group with
/// its cusp. Smaller circles crowd into the horoballs of other cusps, where
/// nearly redundant ones survive or not depending on rounding.
fn ford_radii(inst: &FamilyInstance) -> Vec<f64> {
    let d = FordDomain::compute(&inst.group, &FordOptions::default());
    assert!(d.certified);
    let mut r: Vec<f64> = d.circles.iter().map(|c| c.radius).filter(|&r| r > 1e-4).collect();
    r.sort_by(f64::total_cmp);
    r
}

#[test]
fn reversed_chain_is_the_same_surface() {
    let l = 0.3;
    let inst = glue_chain(&ChainFamilySpec::family_b(l, l)).unwrap();
    let want = ford_radii(&inst);
    let same = |got: &[f64]| got.len() == want.len() && got.iter().zip(&want).all(|(a, b)| (a - b).abs() <= 1e-9 * b);
    for slot in [1, 2] {
        let rev = glue_chain(&reversed_chain(l, slot)).unwrap();
        assert_eq!(rev.lengths, inst.lengths);
        for label in ["gamma1", "gamma2"] {
            let a = exact_trace(&inst.group, &inst.curve_words[label]).abs();
            let b = exact_trace(&rev.group, &rev.curve_words[label]).abs();
            assert!((a - b).abs() < 1e-9);
        }
        // slot 2 of the far pants is the image of the Eisenstein cusp under
        // the swap; slot 1 is the other cusp, a different cusped surface
        assert_eq!(same(&ford_radii(&rev)), slot == 2, "slot {slot}");
    }
}

#[test]
fn twist_zero_instance_is_mirror_symmetric() {
    let s = SpectralParameter::real(2.0).unwrap();
    let mirror = |z: UpperHalfPoint| UpperHalfPoint::new(-z.re, z.im).unwrap();
    let inst = glue_chain(&ChainFamilySpec::family_a(0.35)).unwrap();
    let e = |inst: &FamilyInstance, z| eisenstein_eval(&inst.group, z, s, 1e-6).unwrap().value.re;
    let mut points = vec![UpperHalfPoint::new(0.13, 0.21).unwrap()];
    for k in [0.0, 0.5, 1.0] {
        for side in ["S1", "S2"] {
            points.push(basepoint(&inst, &BasepointSpec::collar("gamma1", k, side)).unwrap());
        }
    }
    for z in points {
        let (a, b) = (e(&inst, z), e(&inst, mirror(z)));
        assert!((a - b).abs() <= 1e-5 * a, "{z}: {a} vs {b}");
    }
    // a reflection that is not a symmetry moves E
    let z = UpperHalfPoint::new(0.13, 0.21).unwrap();
    let off = UpperHalfPoint::new(0.5 - z.re, z.im).unwrap();
    let (a, b) = (e(&inst, z), e(&inst, off));
    assert!((a - b).abs() > 1e-3 * a, "{a} vs {b}");
}

#[test]
fn eisenstein_is_continuous_across_the_grid() {
    let s = SpectralParameter::real(2.0).unwrap();
    let grid = [0.5, 0.35, 0.25, 0.18, 0.12];
    let values: Vec<f64> = grid
        .iter()
        .map(|&l| {
            let inst = glue_chain(&ChainFamilySpec::family_a(l)).unwrap();
            let z = basepoint(&inst, &BasepointSpec::thick("S1")).unwrap();
            eisenstein_eval(&inst.group, z, s, 1e-6).unwrap().value.re
        })
        .collect();
    for w in values.windows(2) {
        assert!((w[1] / w[0] - 1.0).abs() < 0.05, "{values:?}");
    }
}

#[test]
fn counting_sandwich_at_collar_points() {
    for spec in [ChainFamilySpec::family_a(0.5), ChainFamilySpec::family_b(0.35, 0.35)] {
        let inst = glue_chain(&spec).unwrap();
        let z = basepoint(&inst, &BasepointSpec::collar("gamma1", 0.5, "S2")).unwrap();
        let table = fuchsian_enum::enumerate_cosets(&inst.group, z, 10.0, &Default::default()).unwrap();
        assert!(table.complete);
        for k in 0..=100 {
            let t = 8.0 * k as f64 / 100.0;
            let (pz, ph) = fuchsian_enum::counting_functions(&table, t).unwrap();
            if t + 1.0 <= 9.0 {
                let (pz1, _) = fuchsian_enum::counting_functions(&table, t + 1.0).unwrap();
                assert!(pz <= ph && ph <= pz1, "t = {t}: {pz} {ph} {pz1}");
            }
        }
    }
}

#[test]
fn cusp_points_sit_on_their_horocycles() {
    let inst = glue_chain(&ChainFamilySpec::family_b(0.35, 0.35)).unwrap();
    for label in inst.cusps.clone() {
        let Some(Locator::Cusp { normalizer, .. }) = inst.component_of.get(&label) else { panic!("{label}") };
        for a in [1.0, 2.0] {
            let z = basepoint(&inst, &BasepointSpec::cusp(&label, a)).unwrap();
            let w = normalizer.apply(z);
            assert!((w.im - a).abs() < 1e-6 * a, "{label}: {w}");
        }
        // the normalizer takes the peripheral element to a unit translation;
        // the deepest cusps carry ~1e-4 of rounding from entries near 1e5
        let p = inst.word_matrix(&inst.curve_words[&label]);
        let q = normalizer.conjugate(&p);
        let q = if q.a < 0.0 { q.neg() } else { q };
        assert!(q.c.abs() < 1e-4 && (q.a - 1.0).abs() < 1e-4 && (q.b.abs() - 1.0).abs() < 1e-4, "{label}: {q:?}");
    }
}

#[test]
fn words_of_the_curves_are_recorded() {
    let inst = glue_chain(&ChainFamilySpec::family_b(0.35, 0.25)).unwrap();
    for key in ["gamma1", "gamma2", "E", "p1", "p2", "p3", "p4"] {
        let w: &Word = &inst.curve_words[key];
        assert!(!w.0.is_empty(), "{key}");
    }
    assert_eq!(inst.length("gamma2").unwrap(), 0.25);
}
