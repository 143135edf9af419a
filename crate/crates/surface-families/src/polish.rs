//! Last-place rounding of the generator entries.
//!
//! Far from the normalized cusp the entries reach 1e5, and one unit in the
//! last place of a single entry moves the trace of a peripheral product by
//! more than the contract tolerance. The steps of different entries differ
//! slightly, so small combinations of them reach much finer traces.

use fuchsian_enum::Word;
use hyperbolic_core::Mobius;

use crate::checks::exact_trace_in;
use crate::FamilyInstance;

/// Largest move of one entry, in units in the last place.
const MAX_STEP: i64 = 16;

/// Score below which no further moves are tried.
const GOOD_ENOUGH: f64 = 0.05;

fn step(x: f64, n: i64) -> f64 {
    if x == 0.0 || n == 0 {
        return x;
    }
    f64::from_bits((x.to_bits() as i64 + n) as u64)
}

fn entries(m: &Mobius) -> [f64; 4] {
    [m.a, m.b, m.c, m.d]
}

fn with_entry(m: &Mobius, k: usize, v: f64) -> Mobius {
    let mut e = entries(m);
    e[k] = v;
    Mobius::new(e[0], e[1], e[2], e[3])
}

/// Targets of the contract words: trace `2` for a cusp, `2 cosh(L/2)` for
/// a pinching curve, with the trace tolerance matching the contract.
fn targets(inst: &FamilyInstance) -> Vec<(Word, f64, f64)> {
    let mut out = Vec::new();
    for (label, &l) in &inst.lengths {
        out.push((inst.curve_words[label].clone(), 2.0 * (l / 2.0).cosh(), 1e-9 * (l / 2.0).sinh()));
    }
    for label in &inst.cusps {
        out.push((inst.curve_words[label].clone(), 2.0, hyperbolic_core::PARABOLIC_TOL));
    }
    out
}

fn residuals(mats: &[Mobius], goals: &[(Word, f64, f64)]) -> Vec<f64> {
    goals.iter().map(|(w, t, tol)| (exact_trace_in(mats, w).abs() - t) / tol).collect()
}

fn score(r: &[f64]) -> f64 {
    r.iter().fold(0.0, |a: f64, x| a.max(x.abs()))
}

/// Re-rounds the entries of the non-cusp generators within a few units in
/// the last place to minimize the worst contract residual. The traces are
/// compared exactly, and the instance is changed only on improvement.
pub(crate) fn polish_generators(inst: &mut FamilyInstance) {
    let goals = targets(inst);
    let base: Vec<Mobius> = inst.group.generators.iter().map(|g| g.matrix).collect();
    let r0 = residuals(&base, &goals);
    if score(&r0) <= GOOD_ENOUGH {
        return;
    }
    // residual change per unit step of each entry; exact, and linear at
    // this scale
    let mut vars = Vec::new();
    for (gi, m) in base.iter().enumerate() {
        if gi == inst.group.parabolic {
            continue;
        }
        for k in 0..4 {
            let x = entries(m)[k];
            if x == 0.0 || x.fract() == 0.0 && x.abs() < 1e15 {
                continue;
            }
            let mut mats = base.clone();
            mats[gi] = with_entry(m, k, step(x, 1));
            let d: Vec<f64> = residuals(&mats, &goals).iter().zip(&r0).map(|(a, b)| a - b).collect();
            vars.push((gi, k, d));
        }
    }
    let model = |n: &[i64]| {
        let mut r = r0.clone();
        for (v, &nv) in vars.iter().zip(n) {
            for (rj, dj) in r.iter_mut().zip(&v.2) {
                *rj += nv as f64 * dj;
            }
        }
        score(&r)
    };
    let mut n = vec![0i64; vars.len()];
    let mut best = model(&n);
    let mut moves: Vec<Vec<(usize, i64)>> = Vec::new();
    for i in 0..vars.len() {
        for si in [-1, 1] {
            moves.push(vec![(i, si)]);
            for j in i + 1..vars.len() {
                for sj in [-1, 1] {
                    moves.push(vec![(i, si), (j, sj)]);
                }
            }
        }
    }
    while best > GOOD_ENOUGH {
        let mut found = None;
        for mv in &moves {
            if mv.iter().any(|&(i, s)| (n[i] + s).abs() > MAX_STEP) {
                continue;
            }
            let mut t = n.clone();
            for &(i, s) in mv {
                t[i] += s;
            }
            let sc = model(&t);
            if sc < found.as_ref().map_or(best, |f: &(f64, Vec<i64>)| f.0) {
                found = Some((sc, t));
            }
        }
        match found {
            Some((sc, t)) => {
                best = sc;
                n = t;
            }
            None => break,
        }
    }
    let mut mats = base.clone();
    for (v, &nv) in vars.iter().zip(&n) {
        let m = mats[v.0];
        mats[v.0] = with_entry(&m, v.1, step(entries(&m)[v.1], nv));
    }
    if score(&residuals(&mats, &goals)) < score(&r0) {
        for (g, m) in inst.group.generators.iter_mut().zip(mats) {
            g.matrix = m;
        }
    }
}
