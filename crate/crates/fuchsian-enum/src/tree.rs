//! Reverse-search traversal of the descent tree.
//!
//! Every coset below the top level has a canonical parent: the strip
//! image of the greedy ascent step. A child is expanded only when the
//! parent generating it is its canonical one, so each coset is visited
//! once and no table of seen cosets is kept. Subtrees are independent,
//! which gives a deterministic parallel fold.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use hyperbolic_core::{strip_normalize, Mobius, UpperHalfPoint};
use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::enumerate::{Enumerator, VisitSummary};
use crate::EnumError;

/// A coset reached by the tree traversal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hit {
    /// Coset representative mapping the base point into the strip.
    pub witness: Mobius,
    /// `δ̂z`, with `Re ∈ [-1/2, 1/2)`.
    pub point: UpperHalfPoint,
    pub depth: u32,
}

/// Ascent steps must shrink `|cw + d|²` below `1 - STEP_TOL`.
const STEP_TOL: f64 = 1e-9;
/// Relative window in which two ascent steps count as tied.
const TIE_TOL: f64 = 1e-9;
/// Number of subtrees handed to the pool.
const FRONTIER: usize = 64;

fn sign_row(c: f64, d: f64) -> (f64, f64) {
    if c < 0.0 || (c == 0.0 && d < 0.0) {
        (-c, -d)
    } else {
        (c, d)
    }
}

fn row_less(a: (f64, f64), b: (f64, f64)) -> bool {
    let tol = 1e-6 * (1.0 + a.0.abs().max(b.0.abs()));
    if (a.0 - b.0).abs() > tol {
        a.0 < b.0
    } else {
        a.1 < b.1
    }
}

fn row_close(a: (f64, f64), b: (f64, f64)) -> bool {
    let tol = 1e-9 * (1.0 + a.0.abs() + a.1.abs());
    (a.0 - b.0).abs() <= tol && (a.1 - b.1).abs() <= tol
}

struct Node {
    m: Mobius,
    p: UpperHalfPoint,
    depth: u32,
}

struct Shared<'a> {
    z: UpperHalfPoint,
    min_height: f64,
    visited: &'a AtomicUsize,
    stop: &'a AtomicBool,
}

#[derive(Default)]
struct Stats {
    visited: usize,
    rejected: usize,
    max_depth: u32,
    budget_hit: bool,
}

impl Stats {
    fn absorb(&mut self, o: Stats) {
        self.visited += o.visited;
        self.rejected += o.rejected;
        self.max_depth = self.max_depth.max(o.max_depth);
        self.budget_hit |= o.budget_hit;
    }
}

impl Enumerator {
    /// Calls `f(step, child, point)` for every descent image of the coset
    /// `mp` (at `p`) whose height is at least `min_height`.
    fn for_each_child(
        &self,
        mp: &Mobius,
        p: UpperHalfPoint,
        z: UpperHalfPoint,
        min_height: f64,
        mut f: impl FnMut(usize, Mobius, UpperHalfPoint),
    ) {
        let y = p.im;
        for (k, h) in self.steps.iter().enumerate() {
            let c2 = h.c * h.c;
            let hi = y / (min_height * c2) - y * y;
            if hi < 0.0 {
                continue;
            }
            let lo = (1.0 - STEP_TOL) / c2 - y * y;
            let off = p.re + h.d / h.c;
            let s = hi.sqrt();
            let m_lo = (-s - off).ceil() as i64;
            let m_hi = (s - off).floor() as i64;
            for m in m_lo..=m_hi {
                let u = off + m as f64;
                if u * u < lo {
                    continue;
                }
                let child = h.shift_right(m as f64).compose(mp);
                let raw = child.apply(z);
                if raw.im < min_height {
                    continue;
                }
                let (w, n) = strip_normalize(raw);
                let child = if n == 0 { child } else { child.shift_left(-(n as f64)) };
                f(k, child, w);
            }
        }
    }

    /// Step index and bottom row of the canonical parent of the coset `m`
    /// at `w`; `None` on the top level.
    fn canonical_parent(&self, m: &Mobius, w: UpperHalfPoint) -> Option<(usize, (f64, f64))> {
        let mut best: Option<(f64, usize, (f64, f64))> = None;
        for (k, circle) in self.domain.circles.iter().enumerate() {
            let g = circle.element;
            let n0 = (w.re - circle.center).round();
            for n in [n0 - 1.0, n0, n0 + 1.0] {
                let h = g.shift_right(-n);
                let v = h.denom_sq(w);
                if v >= 1.0 - STEP_TOL {
                    continue;
                }
                let row = sign_row(h.c * m.a + h.d * m.c, h.c * m.b + h.d * m.d);
                let better = match best {
                    None => true,
                    Some((bv, bk, brow)) => {
                        if v < bv * (1.0 - TIE_TOL) {
                            true
                        } else if v <= bv * (1.0 + TIE_TOL) {
                            row_less(row, brow) || (!row_less(brow, row) && k < bk)
                        } else {
                            false
                        }
                    }
                };
                if better {
                    best = Some((v, k, row));
                }
            }
        }
        best.map(|(_, k, row)| (k, row))
    }

    /// Accepted children of a node, in generation order.
    fn expand(&self, node: &Node, sh: &Shared, stats: &mut Stats, mut f: impl FnMut(Node)) {
        let row = node.m.bottom_row();
        self.for_each_child(&node.m, node.p, sh.z, sh.min_height, |k, child, w| {
            match self.canonical_parent(&child, w) {
                Some((pk, prow)) if pk == k && row_close(prow, row) => {
                    f(Node { m: child, p: w, depth: node.depth + 1 })
                }
                _ => stats.rejected += 1,
            }
        });
    }

    fn dfs<A>(&self, root: Node, sh: &Shared, acc: &mut A, fold: &(impl Fn(&mut A, &Hit) + ?Sized)) -> Stats {
        let mut stats = Stats::default();
        let mut stack = vec![root];
        while let Some(node) = stack.pop() {
            if node.depth >= self.opts.word_cap {
                stats.budget_hit = true;
                continue;
            }
            if sh.stop.load(Ordering::Relaxed) {
                stats.budget_hit = true;
                break;
            }
            let mut kids = Vec::new();
            self.expand(&node, sh, &mut stats, |c| kids.push(c));
            for c in kids {
                fold(acc, &Hit { witness: c.m, point: c.p, depth: c.depth });
                stats.visited += 1;
                stats.max_depth = stats.max_depth.max(c.depth);
                stack.push(c);
            }
            if sh.visited.fetch_add(1, Ordering::Relaxed) + 1 >= self.opts.record_cap {
                sh.stop.store(true, Ordering::Relaxed);
            }
        }
        stats
    }

    /// Cosets on the top level: the Ford point coset and its images under
    /// side pairings at equal height.
    fn top_level(&self, z: UpperHalfPoint, min_height: f64) -> Result<Vec<Node>, EnumError> {
        let (m0, w0) = self.ford_point(z)?;
        if w0.im < min_height {
            return Ok(Vec::new());
        }
        let q = 1e-7;
        let key = |m: &Mobius| {
            let r = m.bottom_row();
            ((r.0 / q).round() as i64, (r.1 / q).round() as i64)
        };
        let mut seen = FxHashSet::default();
        seen.insert(key(&m0));
        let mut out = vec![Node { m: m0, p: w0, depth: 0 }];
        let mut i = 0;
        while i < out.len() {
            let (m, p) = (out[i].m, out[i].p);
            let floor = (p.im * (1.0 - 1e-6)).max(min_height);
            let mut found = Vec::new();
            self.for_each_child(&m, p, z, floor, |_, child, w| {
                if self.canonical_parent(&child, w).is_none() {
                    found.push((child, w));
                }
            });
            for (child, w) in found {
                if seen.insert(key(&child)) {
                    out.push(Node { m: child, p: w, depth: 0 });
                }
            }
            i += 1;
        }
        Ok(out)
    }

    /// Folds `fold` over every coset with `Im δ̂z ≥ min_height`. The
    /// traversal is split into a fixed set of subtrees folded on the rayon
    /// pool and merged in a fixed order, so the result does not depend on
    /// the number of threads.
    pub fn fold_tree<A, I, F, M>(
        &self,
        z: UpperHalfPoint,
        min_height: f64,
        init: I,
        fold: F,
        merge: M,
    ) -> Result<(A, VisitSummary), EnumError>
    where
        A: Send,
        I: Fn() -> A + Sync,
        F: Fn(&mut A, &Hit) + Sync,
        M: Fn(&mut A, A),
    {
        let top = self.top_level(z, min_height)?;
        let top_height = match top.first() {
            Some(n) => n.p.im,
            None => self.ford_point(z)?.1.im,
        };
        let visited = AtomicUsize::new(0);
        let stop = AtomicBool::new(false);
        let sh = Shared { z, min_height, visited: &visited, stop: &stop };
        let mut acc = init();
        let mut stats = Stats::default();
        for n in &top {
            fold(&mut acc, &Hit { witness: n.m, point: n.p, depth: 0 });
            stats.visited += 1;
        }
        // breadth-first until the frontier is wide enough to share out
        let mut frontier = top;
        while !frontier.is_empty() && frontier.len() < FRONTIER {
            let mut next = Vec::new();
            for node in &frontier {
                if node.depth >= self.opts.word_cap {
                    stats.budget_hit = true;
                    continue;
                }
                self.expand(node, &sh, &mut stats, |c| next.push(c));
            }
            for c in &next {
                fold(&mut acc, &Hit { witness: c.m, point: c.p, depth: c.depth });
                stats.visited += 1;
                stats.max_depth = stats.max_depth.max(c.depth);
            }
            visited.fetch_add(frontier.len(), Ordering::Relaxed);
            frontier = next;
            if frontier.len() >= FRONTIER {
                break;
            }
        }
        let parts: Vec<(A, Stats)> = frontier
            .into_par_iter()
            .map(|n| {
                let mut a = init();
                let s = self.dfs(n, &sh, &mut a, &fold);
                (a, s)
            })
            .collect();
        for (a, s) in parts {
            merge(&mut acc, a);
            stats.absorb(s);
        }
        stats.budget_hit |= stop.load(Ordering::Relaxed);
        let summary = VisitSummary {
            visited: stats.visited,
            duplicates: stats.rejected,
            max_depth: stats.max_depth,
            complete: self.domain.complete_above(min_height) && !stats.budget_hit,
            budget_hit: stats.budget_hit,
            top_height,
        };
        Ok((acc, summary))
    }

    /// Sequential depth-first traversal in a fixed order.
    pub fn visit_tree<F: FnMut(&Hit)>(
        &self,
        z: UpperHalfPoint,
        min_height: f64,
        mut f: F,
    ) -> Result<VisitSummary, EnumError> {
        let top = self.top_level(z, min_height)?;
        let top_height = match top.first() {
            Some(n) => n.p.im,
            None => self.ford_point(z)?.1.im,
        };
        let visited = AtomicUsize::new(0);
        let stop = AtomicBool::new(false);
        let sh = Shared { z, min_height, visited: &visited, stop: &stop };
        let mut stats = Stats::default();
        let mut fr = &mut f;
        for n in top {
            fr(&Hit { witness: n.m, point: n.p, depth: 0 });
            stats.visited += 1;
            let s = self.dfs(n, &sh, &mut fr, &|a: &mut &mut F, h: &Hit| a(h));
            stats.absorb(s);
        }
        stats.budget_hit |= stop.load(Ordering::Relaxed);
        Ok(VisitSummary {
            visited: stats.visited,
            duplicates: stats.rejected,
            max_depth: stats.max_depth,
            complete: self.domain.complete_above(min_height) && !stats.budget_hit,
            budget_hit: stats.budget_hit,
            top_height,
        })
    }
}
