use std::collections::BTreeMap;
use std::f64::consts::PI;

use fuchsian_enum::{GroupPresentation, Letter, Word};
use hyperbolic_core::{Mobius, UpperHalfPoint};

use crate::geometry::to_infinity;
use crate::{anchor, build_pants, BoundaryDatum, ChainFamilySpec, FamilyError, Pants};

/// `z ↦ -z̄` acting on a matrix.
pub fn mirror(m: &Mobius) -> Mobius {
    Mobius::new(m.a, -m.b, -m.c, m.d)
}

/// Placement of one pants: a point `w` of its normal form sits at
/// `to_global(ρ(w))` where `ρ` is `z ↦ -z̄` when mirrored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PantsFrame {
    pub to_global: Mobius,
    pub mirrored: bool,
    /// Sign of `Re` of the pants body in the normal form, seen from the
    /// boundary glued to the parent; zero for the first pants.
    pub body_sign: f64,
    /// Spec slot occupying normal-form slot 0.
    pub rotation: usize,
}

fn reflect(mut p: UpperHalfPoint, on: bool) -> UpperHalfPoint {
    if on {
        p.re = -p.re;
    }
    p
}

fn mirror_if(m: &Mobius, on: bool) -> Mobius {
    if on {
        mirror(m)
    } else {
        *m
    }
}

impl PantsFrame {
    pub fn point_to_global(&self, w: UpperHalfPoint) -> UpperHalfPoint {
        self.to_global.apply(reflect(w, self.mirrored))
    }

    pub fn point_to_local(&self, z: UpperHalfPoint) -> UpperHalfPoint {
        reflect(self.to_global.inverse().apply(z), self.mirrored)
    }

    pub fn matrix_to_global(&self, m: &Mobius) -> Mobius {
        self.to_global.conjugate(&mirror_if(m, self.mirrored))
    }

    /// Frame of `w ↦ self(m(w))` for a Möbius map `m` of the normal form.
    fn then(&self, m: &Mobius) -> PantsFrame {
        PantsFrame { to_global: self.to_global.compose(&mirror_if(m, self.mirrored)), ..*self }
    }
}

/// Where a region tag lives in the glued group.
#[derive(Debug, Clone, PartialEq)]
pub enum Locator {
    /// A pants; `anchor` is its seam incenter in global coordinates.
    Component { pants: usize, anchor: Option<UpperHalfPoint> },
    /// A pinching curve between the pants `outer` (placed first) and
    /// `inner`, whose normal form has the curve on the imaginary axis.
    Collar { inner: usize, outer: usize, length: f64 },
    /// A cusp; `normalizer` conjugates its peripheral element to `z ↦ z ± 1`.
    Cusp { pants: usize, slot: usize, normalizer: Mobius },
}

#[derive(Debug, Clone)]
pub struct FamilyInstance {
    pub spec: ChainFamilySpec,
    pub group: GroupPresentation,
    /// Pinching curves and peripheral classes.
    pub curve_words: BTreeMap<String, Word>,
    pub lengths: BTreeMap<String, f64>,
    pub component_of: BTreeMap<String, Locator>,
    pub frames: Vec<PantsFrame>,
    /// Boundary elements per pants in normal-form slot order.
    pub boundary: Vec<[Mobius; 3]>,
    pub boundary_words: Vec<[Word; 3]>,
    /// Cusp labels, the Eisenstein cusp first.
    pub cusps: Vec<String>,
}

pub const EISENSTEIN_CUSP: &str = "E";

pub fn component_tag(pants: usize) -> String {
    format!("S{}", pants + 1)
}

fn rotate(data: &[BoundaryDatum; 3], r: usize) -> [BoundaryDatum; 3] {
    [data[r % 3], data[(r + 1) % 3], data[(r + 2) % 3]]
}

fn sign_of_median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    if xs.is_empty() {
        return 0.0;
    }
    xs[xs.len() / 2].signum()
}

fn finite_fixed_points(m: &Mobius) -> Vec<f64> {
    let (a, r) = m.fixed_points();
    [a, r].into_iter().flatten().collect()
}

/// Maps `∞ ↦` the attracting and `0 ↦` the repelling fixed point of `b`.
fn normalizer(b: &Mobius) -> Result<Mobius, FamilyError> {
    let (att, rep) = b.fixed_points();
    let (Some(att), Some(rep)) = (att, rep) else {
        return Err(FamilyError::ConstructionFailure("glued boundary fixes ∞".into()));
    };
    let m = if att > rep { Mobius::new(att, rep, 1.0, 1.0) } else { Mobius::new(att, -rep, 1.0, -1.0) };
    Ok(Mobius::unimodular(m.a, m.b, m.c, m.d)?)
}

/// Conjugator taking the parabolic `p` to `z ↦ z ± 1`.
pub fn cusp_normalizer(p: &Mobius) -> Result<Mobius, FamilyError> {
    let (fix, _) = p.fixed_points();
    let r = to_infinity(fix);
    let q = r.conjugate(p);
    let q = if q.a < 0.0 { q.neg() } else { q };
    if !(q.c.abs() <= 1e-9 * q.max_abs()) || !(q.b != 0.0) {
        return Err(FamilyError::NormalizationFailure(format!("{p:?} is not parabolic")));
    }
    let lam = q.b.abs().sqrt().recip();
    Ok(Mobius::diag(lam).compose(&r))
}

fn letter(gen: usize) -> Letter {
    Letter { gen, inverse: false }
}

/// Side of the imaginary axis holding the pants whose boundary slot
/// `slot` has been normalized onto it, seen through `view`.
fn side_of(boundary: &[Mobius; 3], slot: usize, view: &Mobius) -> Result<f64, FamilyError> {
    let xs: Vec<f64> = (0..3)
        .filter(|&t| t != slot)
        .flat_map(|t| finite_fixed_points(&view.conjugate(&boundary[t])))
        .filter(|x| x.abs() > 1e-12)
        .collect();
    let sign = sign_of_median(xs.clone());
    if xs.iter().any(|x| x.signum() != sign) {
        return Err(FamilyError::ConstructionFailure("pants straddles its own boundary axis".into()));
    }
    Ok(sign)
}

/// Glues the pants of `spec` along its gluings, each new pants on the far
/// side of the shared axis from the pants it is glued to, and conjugates
/// the result so the Eisenstein cusp is `z ↦ z + 1`. Frames are built as
/// products of maps between normal forms, never from fixed points of the
/// glued (and possibly badly conditioned) global elements.
pub fn glue_chain(spec: &ChainFamilySpec) -> Result<FamilyInstance, FamilyError> {
    spec.validate()?;
    let n = spec.pants.len();
    let mut gens: Vec<(String, Mobius)> = Vec::new();
    let mut local: Vec<Option<Pants>> = vec![None; n];
    let mut frames: Vec<Option<PantsFrame>> = vec![None; n];
    let mut mats: Vec<[Mobius; 3]> = vec![[Mobius::IDENTITY; 3]; n];
    let mut words: Vec<[Word; 3]> = vec![Default::default(); n];
    let mut placement: Vec<(usize, usize)> = vec![(0, 0); spec.gluings.len()];

    let r0 = spec.eisenstein_cusp.slot;
    let p0 = build_pants_rotated(&spec.pants[0], r0)?;
    gens.push(("X0".into(), p0.x));
    gens.push(("Y0".into(), p0.y));
    mats[0] = p0.boundary();
    words[0] = Pants::boundary_words();
    frames[0] = Some(PantsFrame {
        to_global: Mobius::IDENTITY,
        mirrored: false,
        // slot 0 here is the Eisenstein cusp, not an axis; the first pants
        // is never the inner side of a collar, so no side is needed
        body_sign: 0.0,
        rotation: r0,
    });
    local[0] = Some(p0);

    let mut pending: Vec<usize> = (0..spec.gluings.len()).collect();
    while !pending.is_empty() {
        let pos = pending
            .iter()
            .position(|&k| {
                let g = spec.gluings[k];
                frames[g.pants.0].is_some() != frames[g.pants.1].is_some()
            })
            .ok_or_else(|| FamilyError::InvalidSpec("gluings do not form a chain from the first pants".into()))?;
        let k = pending.remove(pos);
        let g = spec.gluings[k];
        let ((i, si), (j, sj)) = if frames[g.pants.0].is_some() {
            ((g.pants.0, g.slots.0), (g.pants.1, g.slots.1))
        } else {
            ((g.pants.1, g.slots.1), (g.pants.0, g.slots.0))
        };
        placement[k] = (i, j);
        let fi = frames[i].unwrap();
        let ti = (si + 3 - fi.rotation) % 3;
        let bi = local[i].as_ref().unwrap().boundary();
        let pj = build_pants_rotated(&spec.pants[j], sj)?;
        let l = spec.pants[j][sj].length().expect("validated geodesic");
        // normalizer of the glued boundary inside the normal form of pants i
        let m = normalizer(&bi[ti])?;
        let m_inv = m.inverse();
        let seen = m_inv.conjugate(&bi[ti]);
        if !seen.approx_eq(&pj.x, 1e-9) {
            return Err(FamilyError::ConstructionFailure(format!("glued boundary {seen:?} does not match {:?}", pj.x)));
        }
        let body_sign = side_of(&bi, ti, &m_inv)?;
        let local_side = side_of(&pj.boundary(), 0, &Mobius::IDENTITY)?;
        let mirrored = local_side == body_sign;
        // zero twist lines up the feet of the seams running to the next slot
        let foot_i = anchor::seam_foot(&bi, (ti + 1) % 3, &m_inv);
        let foot_j = anchor::seam_foot(&pj.boundary(), 1, &Mobius::IDENTITY);
        let (Some(foot_i), Some(foot_j)) = (foot_i, foot_j) else {
            return Err(FamilyError::ConstructionFailure("no seam foot on the glued boundary".into()));
        };
        let twist = Mobius::diag((foot_i / foot_j).sqrt() * (g.twist * l / 2.0).exp());
        let via = fi.then(&m);
        let frame =
            PantsFrame { mirrored: via.mirrored != mirrored, body_sign: local_side, rotation: sj, ..via }.then(&twist);
        let yg = frame.matrix_to_global(&pj.y);
        let b = mats[i][ti];
        let yl = gens.len();
        gens.push((format!("Y{j}"), yg));
        mats[j] = [b, yg, b.compose(&yg).inverse()];
        let w = words[i][ti].clone();
        words[j] = [w.clone(), Word(vec![letter(yl)]), Word(vec![letter(yl).inv()]).concat(&w.inverse())];
        frames[j] = Some(frame);
        local[j] = Some(pj);
    }
    if let Some(p) = frames.iter().position(|f| f.is_none()) {
        return Err(FamilyError::InvalidSpec(format!("pants {p} is not glued to the chain")));
    }
    let local: Vec<Pants> = local.into_iter().map(Option::unwrap).collect();

    // the Eisenstein cusp is normal-form slot 0 of the first pants
    let nrm = cusp_normalizer(&mats[0][0])?;
    for (_, g) in gens.iter_mut() {
        *g = nrm.conjugate(g);
    }
    for row in mats.iter_mut() {
        for e in row.iter_mut() {
            *e = nrm.conjugate(e);
        }
    }
    let mut frames: Vec<PantsFrame> = frames.into_iter().map(Option::unwrap).collect();
    for f in frames.iter_mut() {
        f.to_global = nrm.compose(&f.to_global);
    }
    let t = Mobius::translation(1.0);
    if !(mats[0][0].approx_eq(&t, 1e-9) || mats[0][0].approx_eq(&t.inverse(), 1e-9)) {
        return Err(FamilyError::NormalizationFailure(format!("cusp element {:?} after conjugation", mats[0][0])));
    }
    let mut group = GroupPresentation::new(gens, "X0")?.with_covolume(2.0 * PI * n as f64);
    if !group.cusp_width_normalized {
        return Err(FamilyError::NormalizationFailure("cusp generator is not z + 1".into()));
    }
    mats[0][0] = group.generators[0].matrix;
    group.contains_minus_identity = false;

    let mut curve_words = BTreeMap::new();
    let mut lengths = BTreeMap::new();
    let mut component_of = BTreeMap::new();
    for p in &spec.pinching_labels {
        let g = spec.gluings[p.gluing];
        let (i, j) = placement[p.gluing];
        let si = if g.pants.0 == i { g.slots.0 } else { g.slots.1 };
        let ti = (si + 3 - frames[i].rotation) % 3;
        let l = spec.pants[i][si].length().expect("validated geodesic");
        curve_words.insert(p.label.clone(), words[i][ti].clone());
        lengths.insert(p.label.clone(), l);
        component_of.insert(p.label.clone(), Locator::Collar { inner: j, outer: i, length: l });
    }
    let mut cusps = vec![EISENSTEIN_CUSP.to_string()];
    let mut next = 1;
    for (k, data) in spec.pants.iter().enumerate() {
        for (s, b) in data.iter().enumerate() {
            if *b != BoundaryDatum::Cusp {
                continue;
            }
            let t = (s + 3 - frames[k].rotation) % 3;
            let label = if (k, s) == (0, spec.eisenstein_cusp.slot) {
                EISENSTEIN_CUSP.to_string()
            } else {
                let l = format!("p{next}");
                next += 1;
                cusps.push(l.clone());
                l
            };
            // conjugates the global element to mirror(z ± 1) = z ∓ 1
            let r = cusp_normalizer(&local[k].boundary()[t])?;
            let normalizer = mirror_if(&r, frames[k].mirrored).compose(&frames[k].to_global.inverse());
            curve_words.insert(label.clone(), words[k][t].clone());
            component_of.insert(label, Locator::Cusp { pants: k, slot: t, normalizer });
        }
    }
    for k in 0..n {
        let anchor = anchor::seam_incenter(&local[k].boundary()).map(|w| frames[k].point_to_global(w));
        component_of.insert(component_tag(k), Locator::Component { pants: k, anchor });
    }
    let mut inst = FamilyInstance {
        spec: spec.clone(),
        group,
        curve_words,
        lengths,
        component_of,
        frames,
        boundary: mats,
        boundary_words: words,
        cusps,
    };
    crate::polish::polish_generators(&mut inst);
    Ok(inst)
}

fn build_pants_rotated(data: &[BoundaryDatum; 3], r: usize) -> Result<Pants, FamilyError> {
    let d = rotate(data, r);
    build_pants(d[0], d[1], d[2])
}

impl FamilyInstance {
    /// Product of the letters with no determinant correction.
    pub fn word_matrix(&self, w: &Word) -> Mobius {
        w.0.iter().fold(Mobius::IDENTITY, |acc, &l| acc.compose_raw(&self.group.letter_matrix(l)))
    }

    pub fn length(&self, label: &str) -> Result<f64, FamilyError> {
        self.lengths.get(label).copied().ok_or_else(|| FamilyError::UnknownLabel(label.into()))
    }

    pub fn component_pants(&self, tag: &str) -> Result<usize, FamilyError> {
        match self.component_of.get(tag) {
            Some(Locator::Component { pants, .. }) => Ok(*pants),
            _ => Err(FamilyError::UnknownLabel(tag.into())),
        }
    }
}
