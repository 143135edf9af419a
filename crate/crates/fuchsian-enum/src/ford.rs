//! Isometric circles `|cz + d| = 1` and the Ford fundamental domain above
//! them. The circles whose arcs bound the domain drive the descent
//! enumeration; the exact area of the domain certifies that no side is
//! missing.

use std::collections::BTreeMap;

use hyperbolic_core::Mobius;

use crate::group::{GroupPresentation, Letter};

/// One side of the Ford domain: a group element and its isometric circle,
/// right-translated so the centre lies in `[-1/2, 1/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FordCircle {
    pub element: Mobius,
    pub center: f64,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FordDomain {
    pub circles: Vec<FordCircle>,
    /// Area of the region above the circles over one period.
    pub area: f64,
    /// Word length of the search that produced the circles.
    pub depth: usize,
    /// True when the side set is stable under deepening, the circles cover
    /// the period up to gaps below [`MAX_GAP_HEIGHT`], and the area matches
    /// the covolume when known.
    pub certified: bool,
    /// See [`FordDomain::complete_above`].
    pub gap_height: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct FordOptions {
    pub max_depth: usize,
    pub max_words: usize,
    /// Relative area tolerance. Near-tangent circles at cusps lose area to
    /// rounding, so this is far above machine precision.
    pub area_rel_tol: f64,
    /// Rounds of side-product closure after the word search.
    pub closure_rounds: usize,
}

impl Default for FordOptions {
    fn default() -> Self {
        Self { max_depth: 5, max_words: 3_000_000, area_rel_tol: 1e-3, closure_rounds: 40 }
    }
}

type CircleKey = (i128, i128);

/// Largest accepted [`FordDomain::gap_height`]. A cusp whose parabolic is
/// only parabolic to rounding leaves a sliver between its circles.
pub const MAX_GAP_HEIGHT: f64 = 1e-6;

/// Largest accepted ratio of an element's entry error bound to `|c|`.
/// Products of cusp-adjacent elements cancel heavily, so errors grow by
/// orders of magnitude per closure round and untrusted circles must go.
const TRUST: f64 = 1e-9;

/// A computed element with a bound on the absolute error of its entries.
#[derive(Debug, Clone, Copy)]
struct Tracked {
    m: Mobius,
    err: f64,
}

impl Tracked {
    fn exact(m: Mobius) -> Self {
        Self { m, err: 0.0 }
    }

    fn compose(&self, o: &Tracked) -> Self {
        let (sa, sb) = (self.m.max_abs(), o.m.max_abs());
        let err = self.err * (sb + o.err) + sa * o.err + 2.0 * f64::EPSILON * sa * sb;
        Self { m: self.m.compose_raw(&o.m), err }
    }

    fn shift_right(&self, n: f64) -> Self {
        let m = self.m.shift_right(n);
        Self { m, err: self.err * (1.0 + n.abs()) + f64::EPSILON * m.max_abs() }
    }

    fn inverse(&self) -> Self {
        Self { m: self.m.inverse(), err: self.err }
    }
}

/// Relative resolution of circle keys: radius in log scale, centre on a
/// grid proportional to the radius, so tiny circles near deep cusps stay
/// distinct while rounding noise in the same circle does not split it.
const KEY_REL: f64 = 1e-7;

fn circle_of(t: &Tracked) -> Option<(CircleKey, FordCircle, f64)> {
    let m = &t.m;
    if m.c.abs() <= 1e-12 * m.max_abs().max(1.0) || t.err > TRUST * m.c.abs() {
        return None;
    }
    let center = -m.d / m.c;
    let k = (center + 0.5).floor();
    let shifted = t.shift_right(k);
    let element = shifted.m.canonical();
    let center = -element.d / element.c;
    let radius = 1.0 / element.c.abs();
    // with a width-one cusp every |c| ≥ 1; larger circles are rounding debris
    if !(radius <= 1.0 + 1e-9) {
        return None;
    }
    let lr = (radius.ln() / KEY_REL).round();
    let unit = (lr * KEY_REL).exp() * KEY_REL;
    let key = ((center / unit).round() as i128, lr as i128);
    Some((key, FordCircle { element, center, radius }, shifted.err))
}

/// Circles keyed on the relative grid; an insertion next to an existing
/// key is the same circle.
#[derive(Default)]
struct CircleSet {
    map: BTreeMap<CircleKey, FordCircle>,
    err: BTreeMap<CircleKey, f64>,
}

impl CircleSet {
    fn insert(&mut self, t: &Tracked) -> bool {
        let Some((k, c, err)) = circle_of(t) else { return false };
        for dl in -1..=1 {
            for dc in -1..=1 {
                if self.map.contains_key(&(k.0 + dc, k.1 + dl)) {
                    return false;
                }
            }
        }
        self.map.insert(k, c);
        self.err.insert(k, err);
        true
    }
}

struct Envelope {
    /// Keys of circles contributing an arc of positive width.
    sides: Vec<CircleKey>,
    area: f64,
    /// Height below which uncovered stretches of the period change the
    /// envelope: a gap of width `w` next to a circle of radius `r` is
    /// felt up to about `√(w r)`. Zero when the circles cover the period.
    gap_height: f64,
}

/// Upper envelope of the circles over `[-1/2, 1/2]`. Writing each circle as
/// `f(x) = r² - (x - c)²`, the quantity `f(x) + x²` is affine in `x`, so the
/// envelope is an upper hull of lines of slope `2c`. Crossings are taken
/// from centre differences rather than intercepts `r² - c²`, which lose
/// small circles to cancellation.
fn envelope(circles: &BTreeMap<CircleKey, FordCircle>) -> Envelope {
    struct Arc {
        xc: f64,
        r: f64,
        key: CircleKey,
    }
    let mut arcs = Vec::new();
    for (key, c) in circles {
        for sh in -2..=2 {
            let xc = c.center + sh as f64;
            if xc - c.radius < 0.5 && xc + c.radius > -0.5 {
                arcs.push(Arc { xc, r: c.radius, key: *key });
            }
        }
    }
    if arcs.is_empty() {
        return Envelope { sides: vec![], area: f64::INFINITY, gap_height: f64::INFINITY };
    }
    arcs.sort_by(|p, q| p.xc.total_cmp(&q.xc).then(p.r.total_cmp(&q.r)));
    // abscissa where the circles have equal height
    let cross = |p: &Arc, q: &Arc| 0.5 * (p.xc + q.xc) + (p.r - q.r) * (p.r + q.r) / (2.0 * (q.xc - p.xc));
    let mut hull: Vec<usize> = Vec::new();
    for i in 0..arcs.len() {
        if let Some(&last) = hull.last() {
            if arcs[last].xc == arcs[i].xc {
                // equal centres: sorted by radius, the newer one dominates
                hull.pop();
            }
        }
        while hull.len() >= 2 {
            let (p, q) = (&arcs[hull[hull.len() - 2]], &arcs[hull[hull.len() - 1]]);
            if cross(p, q) >= cross(q, &arcs[i]) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    let mut xs = vec![-0.5];
    for w in hull.windows(2) {
        xs.push(cross(&arcs[w[0]], &arcs[w[1]]));
    }
    xs.push(0.5);
    let mut area = 0.0;
    // uncovered width next to each hull boundary
    let mut gaps = vec![0.0; xs.len()];
    let mut sides = Vec::new();
    for (k, &li) in hull.iter().enumerate() {
        let lo = xs[k].max(-0.5);
        let hi = xs[k + 1].min(0.5);
        if hi <= lo {
            continue;
        }
        let l = &arcs[li];
        for (x, j) in [(lo, k), (hi, k + 1)] {
            let excess = (x - l.xc).abs() - l.r;
            if excess > 1e-9 * l.r {
                gaps[j] += excess * l.r;
            }
        }
        let asin = |x: f64| ((x - l.xc) / l.r).clamp(-1.0, 1.0).asin();
        area += asin(hi) - asin(lo);
        if hi - lo > 1e-12 * l.r.min(1.0) {
            sides.push(l.key);
        }
    }
    sides.sort();
    sides.dedup();
    Envelope { sides, area, gap_height: gaps.iter().fold(0.0, |a: f64, &b| a.max(b)).sqrt() }
}

impl FordDomain {
    /// Collects isometric circles of short words, then closes the side set
    /// under products `a·Tⁿ·b` of sides and their inverses until the side
    /// set is stable and the area certificate holds.
    pub fn compute(g: &GroupPresentation, opts: &FordOptions) -> FordDomain {
        let letters = g.letters();
        let mut all = CircleSet::default();
        let mut frontier: Vec<(Tracked, Letter)> = Vec::new();
        let mut prev: Option<Vec<CircleKey>> = None;
        let mut best = FordDomain { circles: vec![], area: f64::INFINITY, depth: 0, certified: false, gap_height: 0.0 };
        let assess = |all: &CircleSet, prev: &Option<Vec<CircleKey>>, depth: usize| {
            let env = envelope(&all.map);
            let covers = env.gap_height <= MAX_GAP_HEIGHT;
            let area_ok = match g.covolume {
                Some(a) => covers && ((env.area - a) / a).abs() <= opts.area_rel_tol,
                None => covers,
            };
            let stable = prev.as_ref() == Some(&env.sides);
            let circles: Vec<FordCircle> = env.sides.iter().map(|k| all.map[k]).collect();
            let d = FordDomain {
                circles,
                area: env.area,
                depth,
                certified: area_ok && stable && covers,
                gap_height: env.gap_height,
            };
            (d, env.sides)
        };
        for depth in 1..=opts.max_depth {
            let next: Vec<(Tracked, Letter)> = if depth == 1 {
                letters.iter().map(|&l| (Tracked::exact(g.letter_matrix(l)), l)).collect()
            } else {
                let mut v = Vec::with_capacity(frontier.len() * (letters.len() - 1));
                for (m, last) in &frontier {
                    for &l in &letters {
                        if l == last.inv() {
                            continue;
                        }
                        v.push((m.compose(&Tracked::exact(g.letter_matrix(l))), l));
                    }
                }
                v
            };
            for (m, _) in &next {
                all.insert(m);
            }
            frontier = next;
            // a group with no circles at all is Γ∞ itself
            if all.map.is_empty() && depth >= 2 {
                best.certified = g.generators.iter().all(|gen| gen.matrix.c.abs() <= 1e-12);
                best.gap_height = 0.0;
                return best;
            }
            let (d, sides) = assess(&all, &prev, depth);
            best = d;
            if best.certified {
                return best;
            }
            prev = Some(sides);
            if frontier.len() * (letters.len().max(2) - 1) > opts.max_words {
                break;
            }
        }
        let depth = best.depth;
        for _ in 0..opts.closure_rounds {
            let keys = prev.clone().unwrap_or_default();
            let mut elems: Vec<Tracked> =
                keys.iter().map(|k| Tracked { m: all.map[k].element, err: all.err[k] }).collect();
            elems.extend(elems.clone().iter().map(Tracked::inverse));
            let mut added = false;
            for a in &elems {
                for b in &elems {
                    for n in -1..=1 {
                        added |= all.insert(&a.shift_right(n as f64).compose(b));
                    }
                }
            }
            let (d, sides) = assess(&all, &prev, depth);
            best = d;
            if best.certified || (!added && prev.as_ref() == Some(&sides)) {
                break;
            }
            prev = Some(sides);
        }
        best
    }

    /// Whether a traversal down to `min_height` can be complete: the domain
    /// is certified and nothing above `min_height` falls in a gap.
    pub fn complete_above(&self, min_height: f64) -> bool {
        self.certified && min_height > self.gap_height
    }

    /// True when the group has no element moving ∞.
    pub fn is_cusp_stabilizer_only(&self) -> bool {
        self.circles.is_empty()
    }
}
