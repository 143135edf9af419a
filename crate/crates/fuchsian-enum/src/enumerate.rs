//! Coset enumeration for `Γ∞\Γ` by descent through the Ford domain.
//!
//! Every orbit point `δz` climbs to the Ford point of `z` by repeatedly
//! applying the side element whose circle it lies under. Running those
//! steps backwards from the Ford point reaches every coset, and since
//! heights only decrease along the way a height cutoff prunes exactly.

use std::collections::hash_map::Entry;

use hyperbolic_core::{hyp_distance, strip_normalize, Mobius, UpperHalfPoint};
use rustc_hash::{FxHashMap, FxHashSet};

use crate::ford::{FordDomain, FordOptions};
use crate::group::GroupPresentation;
use crate::EnumError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosetRecord {
    /// Sign-normalized bottom row of the witness.
    pub bottom_row: (f64, f64),
    /// Coset representative mapping the base point into the strip.
    pub witness: Mobius,
    /// `Im δ̂z`.
    pub height: f64,
    /// Distance from `δ̂z` to the horocycle segment at height one.
    pub dist_h: f64,
    /// Distance from `δ̂z` to `i`.
    pub dist_i: f64,
    /// Number of descent steps from the Ford point.
    pub word_length: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitTable {
    pub base_point: UpperHalfPoint,
    /// Sorted by `dist_h`, ties by bottom row.
    pub records: Vec<CosetRecord>,
    pub certified_radius: f64,
    pub complete: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct EnumOptions {
    /// Maximal descent depth.
    pub word_cap: u32,
    pub record_cap: usize,
    /// Quantum of the bottom-row key grid.
    pub key_tol: f64,
    pub ford: FordOptions,
    /// Sort the published table on the rayon pool.
    pub parallel_sort: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        Self {
            word_cap: 4096,
            record_cap: 50_000_000,
            key_tol: 1e-9,
            ford: FordOptions::default(),
            parallel_sort: false,
        }
    }
}

/// Outcome of a streaming traversal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisitSummary {
    pub visited: usize,
    /// Children rejected as already known.
    pub duplicates: usize,
    pub max_depth: u32,
    /// The Ford certificate held and no budget was hit.
    pub complete: bool,
    pub budget_hit: bool,
    /// Height of the Ford point, the largest height in the orbit.
    pub top_height: f64,
}

/// Bottom rows closer than this are the same coset.
pub const DEDUP_TOL: f64 = 1e-8;

pub(crate) fn dist_h_of(height: f64) -> f64 {
    height.ln().abs()
}

fn record_for(m: Mobius, z: UpperHalfPoint, depth: u32) -> (CosetRecord, UpperHalfPoint) {
    let w = m.apply(z);
    let height = m.height_at(z);
    let rec = CosetRecord {
        bottom_row: m.bottom_row(),
        witness: m,
        height,
        dist_h: dist_h_of(height),
        dist_i: hyp_distance(UpperHalfPoint::I, w),
        word_length: depth,
    };
    (rec, UpperHalfPoint { re: w.re, im: height })
}

/// Strip-normalizes `m z` by a left translation of `m`.
pub(crate) fn strip_matrix(m: Mobius, z: UpperHalfPoint) -> Mobius {
    let (_, n) = strip_normalize(m.apply(z));
    if n == 0 {
        m
    } else {
        m.shift_left(-(n as f64))
    }
}

/// Prepared enumeration state for one group.
#[derive(Debug, Clone)]
pub struct Enumerator {
    pub group: GroupPresentation,
    pub domain: FordDomain,
    pub opts: EnumOptions,
    /// Inverses of the side elements: the descent steps.
    pub(crate) steps: Vec<Mobius>,
}

/// Deduplication set over quantized bottom rows.
enum KeySet {
    Keys(FxHashSet<(i64, i64)>),
    Rows(FxHashMap<(i64, i64), (f64, f64)>),
}

impl KeySet {
    fn quantize(x: f64, q: f64) -> (i64, f64) {
        let t = x / q;
        let k = t.round();
        (k as i64, t - k)
    }

    /// Inserts the row; returns `Ok(false)` for a known coset.
    fn insert(&mut self, row: (f64, f64), q: f64) -> Result<bool, EnumError> {
        let (kc, fc) = Self::quantize(row.0, q);
        let (kd, fd) = Self::quantize(row.1, q);
        let nc = if fc > 0.4 {
            1
        } else if fc < -0.4 {
            -1
        } else {
            0
        };
        let nd = if fd > 0.4 {
            1
        } else if fd < -0.4 {
            -1
        } else {
            0
        };
        let mut probes = [(kc, kd); 4];
        let mut np = 1;
        if nc != 0 {
            probes[np] = (kc + nc, kd);
            np += 1;
        }
        if nd != 0 {
            probes[np] = (kc, kd + nd);
            np += 1;
        }
        if nc != 0 && nd != 0 {
            probes[np] = (kc + nc, kd + nd);
            np += 1;
        }
        match self {
            KeySet::Keys(s) => {
                if probes[1..np].iter().any(|p| s.contains(p)) {
                    return Ok(false);
                }
                Ok(s.insert((kc, kd)))
            }
            KeySet::Rows(m) => {
                for p in &probes[..np] {
                    if let Some(&other) = m.get(p) {
                        let diff = (other.0 - row.0).abs().max((other.1 - row.1).abs());
                        let drift = 1e-12 * (1.0 + row.0.abs() + row.1.abs());
                        if diff > 10.0 * DEDUP_TOL && diff > 10.0 * drift {
                            return Err(EnumError::KeyCollision { a: other, b: row });
                        }
                        return Ok(false);
                    }
                }
                match m.entry((kc, kd)) {
                    Entry::Occupied(_) => Ok(false),
                    Entry::Vacant(v) => {
                        v.insert(row);
                        Ok(true)
                    }
                }
            }
        }
    }

    fn len(&self) -> usize {
        match self {
            KeySet::Keys(s) => s.len(),
            KeySet::Rows(m) => m.len(),
        }
    }
}

impl Enumerator {
    pub fn new(group: &GroupPresentation, opts: EnumOptions) -> Result<Self, EnumError> {
        if !group.cusp_width_normalized {
            return Err(EnumError::NotNormalized);
        }
        let group = group.sorted_by_label();
        let domain = FordDomain::compute(&group, &opts.ford);
        let steps = domain.circles.iter().map(|c| c.element.inverse()).collect();
        Ok(Self { group, domain, opts, steps })
    }

    /// Coset matrix placing `z` at its Ford point.
    pub fn ford_point(&self, z: UpperHalfPoint) -> Result<(Mobius, UpperHalfPoint), EnumError> {
        let mut m = strip_matrix(Mobius::IDENTITY, z);
        for _ in 0..100_000 {
            let w = m.apply(z);
            let mut best: Option<(f64, Mobius)> = None;
            for c in &self.domain.circles {
                let g = c.element;
                // translate of the circle nearest to w
                let n0 = (w.re - c.center).round();
                for n in [n0 - 1.0, n0, n0 + 1.0] {
                    let h = g.shift_right(-n);
                    let v = h.denom_sq(w);
                    if v < 1.0 - 1e-12 && best.is_none_or(|(bv, _)| v < bv) {
                        best = Some((v, h));
                    }
                }
            }
            match best {
                None => return Ok((m, m.apply(z))),
                Some((_, h)) => m = strip_matrix(h.compose(&m), z),
            }
        }
        Err(EnumError::ReductionDiverged)
    }

    /// Depth-first traversal of all cosets with `Im δ̂z ≥ min_height`.
    /// `keep_rows` enables the bottom-row collision check at the cost of
    /// memory.
    pub fn visit<F: FnMut(&CosetRecord)>(
        &self,
        z: UpperHalfPoint,
        min_height: f64,
        keep_rows: bool,
        mut f: F,
    ) -> Result<VisitSummary, EnumError> {
        let q = self.opts.key_tol;
        let (m0, w0) = self.ford_point(z)?;
        let mut seen = if keep_rows { KeySet::Rows(FxHashMap::default()) } else { KeySet::Keys(FxHashSet::default()) };
        let mut summary = VisitSummary {
            visited: 0,
            duplicates: 0,
            max_depth: 0,
            complete: false,
            budget_hit: false,
            top_height: w0.im,
        };
        if w0.im < min_height {
            summary.complete = self.domain.complete_above(min_height);
            return Ok(summary);
        }
        seen.insert(m0.bottom_row(), q)?;
        let (rec0, p0) = record_for(m0, z, 0);
        f(&rec0);
        summary.visited = 1;
        let mut stack: Vec<(Mobius, UpperHalfPoint, u32)> = vec![(m0, p0, 0)];
        while let Some((mp, p, depth)) = stack.pop() {
            if depth >= self.opts.word_cap {
                summary.budget_hit = true;
                continue;
            }
            let y = p.im;
            for h in &self.steps {
                let (cp, dp) = (h.c, h.d);
                let c2 = cp * cp;
                let hi = y / (min_height * c2) - y * y;
                if hi < 0.0 {
                    continue;
                }
                let lo = (1.0 - 1e-9) / c2 - y * y;
                let off = p.re + dp / cp;
                let s = hi.sqrt();
                let m_lo = (-s - off).ceil() as i64;
                let m_hi = (s - off).floor() as i64;
                for m in m_lo..=m_hi {
                    let u = off + m as f64;
                    if u * u < lo {
                        continue;
                    }
                    let child = strip_matrix(h.shift_right(m as f64).compose(&mp), z);
                    let height = child.height_at(z);
                    if height < min_height {
                        continue;
                    }
                    if !seen.insert(child.bottom_row(), q)? {
                        summary.duplicates += 1;
                        continue;
                    }
                    let (rec, pc) = record_for(child, z, depth + 1);
                    f(&rec);
                    summary.visited += 1;
                    summary.max_depth = summary.max_depth.max(depth + 1);
                    if summary.visited >= self.opts.record_cap {
                        summary.budget_hit = true;
                        return Ok(summary);
                    }
                    stack.push((child, pc, depth + 1));
                }
            }
        }
        debug_assert_eq!(seen.len(), summary.visited);
        summary.complete = self.domain.complete_above(min_height) && !summary.budget_hit;
        Ok(summary)
    }

    pub fn enumerate(&self, z: UpperHalfPoint, radius: f64) -> Result<OrbitTable, EnumError> {
        if !(radius >= 0.0) {
            return Err(EnumError::NegativeRadius(radius));
        }
        let mut records = Vec::new();
        let summary = self.visit(z, (-radius).exp(), true, |r| {
            if r.dist_h <= radius {
                records.push(*r)
            }
        })?;
        let key = |a: &CosetRecord, b: &CosetRecord| {
            a.dist_h
                .total_cmp(&b.dist_h)
                .then(a.bottom_row.0.total_cmp(&b.bottom_row.0))
                .then(a.bottom_row.1.total_cmp(&b.bottom_row.1))
        };
        if self.opts.parallel_sort {
            use rayon::slice::ParallelSliceMut;
            records.par_sort_by(key);
        } else {
            records.sort_by(key);
        }
        let table = OrbitTable { base_point: z, records, certified_radius: radius, complete: summary.complete };
        if summary.budget_hit {
            return Err(EnumError::BudgetExceeded { partial: Box::new(table) });
        }
        Ok(table)
    }
}

/// Enumerates all cosets with `dist_h ≤ radius`.
pub fn enumerate_cosets(
    g: &GroupPresentation,
    z: UpperHalfPoint,
    radius: f64,
    opts: &EnumOptions,
) -> Result<OrbitTable, EnumError> {
    Enumerator::new(g, *opts)?.enumerate(z, radius)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(re: f64, im: f64) -> UpperHalfPoint {
        UpperHalfPoint::new(re, im).unwrap()
    }

    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn cusp_stabilizer_has_one_coset() {
        let g = GroupPresentation::gamma_infinity();
        for z in [p(0.1, 0.5), p(3.7, 2.0), p(-0.4, 1e-3)] {
            let t = enumerate_cosets(&g, z, 20.0, &EnumOptions::default()).unwrap();
            assert_eq!(t.records.len(), 1);
            assert!(t.complete);
        }
    }

    #[test]
    fn modular_matches_coprime_pairs() {
        let z = p(0.2, 0.3);
        let t = enumerate_cosets(&GroupPresentation::modular(), z, 6.0, &EnumOptions::default()).unwrap();
        assert!(t.complete);
        let mut oracle = 0;
        for c in 0..=200i64 {
            for d in -200..=200i64 {
                if (c == 0 && d != 1) || gcd(c, d) != 1 {
                    continue;
                }
                let den = (c as f64 * z.re + d as f64).powi(2) + (c as f64 * z.im).powi(2);
                let h = z.im / den;
                if h.ln().abs() <= 6.0 {
                    oracle += 1;
                }
            }
        }
        assert_eq!(t.records.len(), oracle);
    }

    #[test]
    fn elliptic_fixed_point_keeps_both_cosets() {
        let t =
            enumerate_cosets(&GroupPresentation::modular(), UpperHalfPoint::I, 0.5, &EnumOptions::default()).unwrap();
        // identity and S both give height one at i
        assert_eq!(t.records.len(), 2);
    }

    #[test]
    fn unnormalized_group_is_rejected() {
        let g = GroupPresentation::parse("P 1 2 0 1\n# parabolic P").unwrap();
        assert!(matches!(
            enumerate_cosets(&g, p(0.0, 1.0), 1.0, &EnumOptions::default()),
            Err(EnumError::NotNormalized)
        ));
    }

    #[test]
    fn record_cap_reports_partial_table() {
        let opts = EnumOptions { record_cap: 10, ..Default::default() };
        match enumerate_cosets(&GroupPresentation::modular(), p(0.2, 0.3), 6.0, &opts) {
            Err(EnumError::BudgetExceeded { partial }) => {
                assert!(!partial.complete);
                assert!(partial.records.len() <= 10);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn coarse_keys_collide() {
        let opts = EnumOptions { key_tol: 10.0, ..Default::default() };
        let r = enumerate_cosets(&GroupPresentation::modular(), p(0.2, 0.3), 6.0, &opts);
        assert!(matches!(r, Err(EnumError::KeyCollision { .. })), "{r:?}");
    }
}
