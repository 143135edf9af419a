//! Prints contracts, systole, anchors and collar points of a family.
//! Usage: report [family-a|family-b|path.json] [elliptic word length] [pinching length]

use std::time::Instant;

use fuchsian_enum::min_displacement;
use hyperbolic_core::dist_to_imag_axis;
use surface_families::*;

fn main() -> Result<(), FamilyError> {
    let args: Vec<String> = std::env::args().collect();
    let mut spec = ChainFamilySpec::load(args.get(1).map_or(FAMILY_A, |s| s.as_str()))?;
    // "0.2" sets every pinching length, "gamma2=0.2" just one
    if let Some(arg) = args.get(3) {
        let (label, l) = arg.split_once('=').map_or((None, arg.as_str()), |(a, b)| (Some(a), b));
        let l: f64 = l.parse().expect("length");
        for p in spec.pinching_labels.clone() {
            if label.is_none_or(|x| x == p.label) {
                spec.set_length(&p.label, l)?;
            }
        }
    }
    let inst = glue_chain(&spec)?;
    for c in trace_contracts(&inst) {
        println!("{:<24} {:.3e} (limit {:.0e}) {}", c.name, c.value, c.limit, if c.pass { "ok" } else { "FAIL" });
    }
    dump(&inst);
    if std::env::var("FORD").is_ok() {
        ford(&inst);
        return Ok(());
    }
    if let Some(n) = args.get(2).and_then(|s| s.parse::<usize>().ok()).filter(|&n| n > 0) {
        let t = Instant::now();
        let e = short_elliptics(&inst.group, n, 5);
        println!("elliptics up to {n}: {} in {:.2?}", e.len(), t.elapsed());
        for w in &e {
            println!("  {} tr {:?}", w.display(&inst.group), inst.word_matrix(w).trace());
        }
    }
    let (sys, w) = systole(&inst.group, SYSTOLE_WORD_LENGTH);
    println!("systole {sys:.6} at {}", w.display(&inst.group));
    for (label, loc) in &inst.component_of {
        match loc {
            Locator::Component { anchor: Some(a), .. } => {
                let d = min_displacement(&inst.group, *a, 2.5)?;
                println!("{label}: anchor {a} displacement {d:.4}");
            }
            Locator::Collar { .. } => {
                for k in [0.0, 0.5, 1.0] {
                    for side in ["S1", "S2", "S3"] {
                        if let Ok(z) = basepoint(&inst, &BasepointSpec::collar(label, k, side)) {
                            let w = collar_coordinates(&inst, label, z)?;
                            println!("{label} k={k} {side}: {z} local dist {:.6}", dist_to_imag_axis(w));
                        }
                    }
                }
            }
            Locator::Cusp { .. } => println!("{label}: {}", basepoint(&inst, &BasepointSpec::cusp(label, 2.0))?),
            _ => {}
        }
    }
    Ok(())
}

fn dump(inst: &FamilyInstance) {
    for g in &inst.group.generators {
        let m = g.matrix;
        println!("{} tr {:.15} det-1 {:.2e} max {:.3e}", g.label, m.trace(), m.det() - 1.0, m.max_abs());
    }
}

fn ford(inst: &FamilyInstance) {
    let t = Instant::now();
    let d = fuchsian_enum::ford::FordDomain::compute(&inst.group, &Default::default());
    println!(
        "ford: {} sides, area {:.9} vs {:.9}, depth {}, certified {} gap {:.2e} in {:.2?}",
        d.circles.len(),
        d.area,
        inst.group.covolume.unwrap(),
        d.depth,
        d.certified,
        d.gap_height,
        t.elapsed()
    );
    if std::env::var("FORD_DUMP").is_ok() {
        for c in &d.circles {
            println!("  c {:.12} r {:.6e} {:?}", c.center, c.radius, c.element);
        }
    }
}
