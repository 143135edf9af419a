use fuchsian_enum::{GroupPresentation, Letter, Word};
use hyperbolic_core::{Mobius, PARABOLIC_TOL};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::FamilyInstance;

/// One measured contract: `value ≤ limit` passes.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractCheck {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

impl ContractCheck {
    pub fn new(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, limit, pass: value <= limit }
    }
}

/// Trace of a word in the generators, exact in the stored entries. Deep
/// generators have entries near 1e5, and a floating product of a few of
/// them loses more of the trace than the contracts allow.
pub fn exact_trace(g: &GroupPresentation, w: &Word) -> f64 {
    let mats: Vec<Mobius> = g.generators.iter().map(|x| x.matrix).collect();
    exact_trace_in(&mats, w)
}

/// [`exact_trace`] with the generator matrices given directly.
pub(crate) fn exact_trace_in(mats: &[Mobius], w: &Word) -> f64 {
    let q = |x: f64| BigRational::from_float(x).expect("finite entry");
    let mut acc = [BigRational::one(), BigRational::zero(), BigRational::zero(), BigRational::one()];
    for &l in &w.0 {
        let m = if l.inverse { mats[l.gen].inverse() } else { mats[l.gen] };
        let [a, b, c, d] = [m.a, m.b, m.c, m.d].map(q);
        let [p, r, s, t] = &acc;
        acc = [p * &a + r * &c, p * &b + r * &d, s * &a + t * &c, s * &b + t * &d];
    }
    let [a, _, _, d] = acc;
    (a + d).to_f64().unwrap_or(f64::NAN)
}

/// Lengths of the pinching curves, parabolicity of the peripheral
/// classes and unit determinants.
pub fn trace_contracts(inst: &FamilyInstance) -> Vec<ContractCheck> {
    let mut out = Vec::new();
    for (label, &l) in &inst.lengths {
        let t = exact_trace(&inst.group, &inst.curve_words[label]).abs();
        let measured = if t > 2.0 { 2.0 * (t / 2.0).acosh() } else { 0.0 };
        out.push(ContractCheck::new(format!("length {label}"), (measured - l).abs(), 1e-9));
    }
    for label in &inst.cusps {
        let t = exact_trace(&inst.group, &inst.curve_words[label]);
        out.push(ContractCheck::new(format!("parabolic {label}"), (t.abs() - 2.0).abs(), PARABOLIC_TOL));
    }
    // relative to the entry scale; larger entries carry more rounding in det
    let det = inst
        .group
        .generators
        .iter()
        .map(|g| (g.matrix.det() - 1.0).abs() / g.matrix.max_abs().powi(2).max(1.0))
        .fold(0.0, f64::max);
    out.push(ContractCheck::new("unit determinants", det, 1e-12));
    out
}

fn inverse_index(idx: usize, rank: usize) -> usize {
    if idx < rank {
        idx + rank
    } else {
        idx - rank
    }
}

/// Calls `f(word, trace, noise)` once per conjugacy class of cyclically
/// reduced words of length `1..=max_len`, on the lexicographically least
/// rotation. Prefixes that are not prefixes of such a least rotation are
/// pruned; `period` is the length of the longest Lyndon prefix.
/// `noise` bounds the rounding in the trace.
fn for_each_cyclic_word(g: &GroupPresentation, max_len: usize, mut f: impl FnMut(&[usize], f64, f64) -> bool) {
    struct Walk<'a> {
        mats: &'a [Mobius],
        scales: &'a [f64],
        rank: usize,
        max_len: usize,
        word: Vec<usize>,
    }
    fn rec(w: &mut Walk, m: &Mobius, sc: f64, period: usize, f: &mut dyn FnMut(&[usize], f64, f64) -> bool) -> bool {
        let n = w.word.len();
        let last = w.word[n - 1];
        let reduced = n == 1 || last != inverse_index(w.word[0], w.rank);
        if reduced && n.is_multiple_of(period) && !f(&w.word, m.trace(), 4.0 * n as f64 * f64::EPSILON * sc) {
            return false;
        }
        if n == w.max_len {
            return true;
        }
        for next in w.word[n - period]..w.mats.len() {
            if next == inverse_index(last, w.rank) {
                continue;
            }
            let p = if next == w.word[n - period] { period } else { n + 1 };
            if n + 1 == w.max_len {
                // leaves need only the trace
                if !(n + 1).is_multiple_of(p) || next == inverse_index(w.word[0], w.rank) {
                    continue;
                }
                let x = &w.mats[next];
                let t = m.a.mul_add(x.a, m.b * x.c) + m.c.mul_add(x.b, m.d * x.d);
                w.word.push(next);
                let go = f(&w.word, t, 4.0 * (n + 1) as f64 * f64::EPSILON * sc * w.scales[next]);
                w.word.pop();
                if !go {
                    return false;
                }
                continue;
            }
            let child = m.compose_raw(&w.mats[next]);
            w.word.push(next);
            let go = rec(w, &child, sc * w.scales[next], p, f);
            w.word.pop();
            if !go {
                return false;
            }
        }
        true
    }
    let mats: Vec<Mobius> = g.letters().iter().map(|&l| g.letter_matrix(l)).collect();
    let scales: Vec<f64> = mats.iter().map(|m| m.max_abs()).collect();
    let mut w =
        Walk { mats: &mats, scales: &scales, rank: g.generators.len(), max_len, word: Vec::with_capacity(max_len) };
    for first in 0..mats.len() {
        w.word.push(first);
        let go = rec(&mut w, &mats[first], scales[first], 1, &mut f);
        w.word.pop();
        if !go {
            return;
        }
    }
}

fn to_word(g: &GroupPresentation, idx: &[usize]) -> Word {
    let letters = g.letters();
    Word(idx.iter().map(|&i| letters[i]).collect::<Vec<Letter>>())
}

/// Nontrivial words up to `max_len` with `|tr| < 2 - 1e-6`, at most `limit`.
pub fn short_elliptics(g: &GroupPresentation, max_len: usize, limit: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for_each_cyclic_word(g, max_len, |w, t, noise| {
        if t.abs() < 2.0 - noise.max(1e-6) {
            out.push(to_word(g, w));
        }
        out.len() < limit
    });
    out
}

/// Word length of the no-short-elliptics smoke test.
pub const ELLIPTIC_WORD_LENGTH: usize = 12;

pub const SYSTOLE_WORD_LENGTH: usize = 4;

/// Shortest translation length among words up to `max_len`, with a word
/// realizing it.
pub fn systole(g: &GroupPresentation, max_len: usize) -> (f64, Word) {
    let mut best = (f64::INFINITY, Word::default());
    for_each_cyclic_word(g, max_len, |w, t, noise| {
        let t = t.abs();
        if t > 2.0 + noise.max(PARABOLIC_TOL) {
            let l = 2.0 * (t / 2.0).acosh();
            if l < best.0 {
                best = (l, to_word(g, w));
            }
        }
        true
    });
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_group_has_elliptics() {
        let g = GroupPresentation::modular();
        let e = short_elliptics(&g, 3, 10);
        assert!(!e.is_empty());
    }

    #[test]
    fn level_two_has_none() {
        let g = GroupPresentation::gamma2_normalized();
        assert!(short_elliptics(&g, 10, 1).is_empty());
    }

    #[test]
    fn cyclic_classes_are_covered() {
        // every cyclically reduced word of length ≤ 4 in two letters is
        // conjugate to a listed one
        let g = GroupPresentation::gamma2_normalized();
        let mut listed = Vec::new();
        for_each_cyclic_word(&g, 4, |w, _, _| {
            listed.push(w.to_vec());
            true
        });
        let rank = 2;
        let rotations = |w: &[usize]| (0..w.len()).map(|k| [&w[k..], &w[..k]].concat()).collect::<Vec<_>>();
        let mut all = vec![vec![]];
        for _ in 0..4 {
            let mut next = Vec::new();
            for w in &all {
                for l in 0..4 {
                    let mut v: Vec<usize> = w.clone();
                    if v.last().is_some_and(|&x| x == inverse_index(l, rank)) {
                        continue;
                    }
                    v.push(l);
                    next.push(v);
                }
            }
            for w in &next {
                if w[0] != inverse_index(*w.last().unwrap(), rank) || w.len() == 1 {
                    assert!(rotations(w).iter().any(|r| listed.contains(r)), "{w:?}");
                }
            }
            all = next;
        }
    }
}
