use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{BoundaryDatum, FamilyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotRef {
    pub pants: usize,
    pub slot: usize,
}

/// Two geodesic boundaries identified, with a twist in units of the
/// boundary length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gluing {
    pub pants: (usize, usize),
    pub slots: (usize, usize),
    #[serde(default)]
    pub twist: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PinchLabel {
    pub label: String,
    pub gluing: usize,
}

/// A chain of pants glued along geodesic boundaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainFamilySpec {
    pub name: String,
    pub pants: Vec<[BoundaryDatum; 3]>,
    pub gluings: Vec<Gluing>,
    pub eisenstein_cusp: SlotRef,
    pub pinching_labels: Vec<PinchLabel>,
}

pub const FAMILY_A: &str = "family-a";
pub const FAMILY_B: &str = "family-b";

fn geo(length: f64) -> BoundaryDatum {
    BoundaryDatum::Geodesic { length }
}

impl ChainFamilySpec {
    /// Four-punctured sphere: two pants joined along `gamma1`.
    pub fn family_a(l: f64) -> Self {
        use BoundaryDatum::Cusp;
        Self {
            name: FAMILY_A.into(),
            pants: vec![[Cusp, Cusp, geo(l)], [geo(l), Cusp, Cusp]],
            gluings: vec![Gluing { pants: (0, 1), slots: (2, 0), twist: 0.0 }],
            eisenstein_cusp: SlotRef { pants: 0, slot: 0 },
            pinching_labels: vec![PinchLabel { label: "gamma1".into(), gluing: 0 }],
        }
    }

    /// Five-punctured sphere: a chain of three pants joined along
    /// `gamma1` and `gamma2`.
    pub fn family_b(l1: f64, l2: f64) -> Self {
        use BoundaryDatum::Cusp;
        Self {
            name: FAMILY_B.into(),
            pants: vec![[Cusp, Cusp, geo(l1)], [geo(l1), Cusp, geo(l2)], [geo(l2), Cusp, Cusp]],
            gluings: vec![
                Gluing { pants: (0, 1), slots: (2, 0), twist: 0.0 },
                Gluing { pants: (1, 2), slots: (2, 0), twist: 0.0 },
            ],
            eisenstein_cusp: SlotRef { pants: 0, slot: 0 },
            pinching_labels: vec![
                PinchLabel { label: "gamma1".into(), gluing: 0 },
                PinchLabel { label: "gamma2".into(), gluing: 1 },
            ],
        }
    }

    /// Builtin catalog at its reference lengths.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            FAMILY_A => Some(Self::family_a(0.5)),
            FAMILY_B => Some(Self::family_b(0.35, 0.35)),
            _ => None,
        }
    }

    /// A builtin name or a JSON spec file.
    pub fn load(name_or_path: &str) -> Result<Self, FamilyError> {
        if let Some(s) = Self::builtin(name_or_path) {
            return Ok(s);
        }
        let text = std::fs::read_to_string(Path::new(name_or_path))
            .map_err(|e| FamilyError::InvalidSpec(format!("{name_or_path}: {e}")))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn gluing_of(&self, label: &str) -> Result<usize, FamilyError> {
        self.pinching_labels
            .iter()
            .find(|p| p.label == label)
            .map(|p| p.gluing)
            .ok_or_else(|| FamilyError::UnknownLabel(label.into()))
    }

    pub fn length_of(&self, label: &str) -> Result<f64, FamilyError> {
        let g = self.gluings[self.gluing_of(label)?];
        self.pants[g.pants.0][g.slots.0]
            .length()
            .ok_or_else(|| FamilyError::InvalidSpec(format!("{label} is glued along a cusp")))
    }

    /// Sets the length of a pinching curve on both sides of its gluing.
    pub fn set_length(&mut self, label: &str, l: f64) -> Result<(), FamilyError> {
        let g = self.gluings[self.gluing_of(label)?];
        self.pants[g.pants.0][g.slots.0] = geo(l);
        self.pants[g.pants.1][g.slots.1] = geo(l);
        Ok(())
    }

    pub fn with_length(mut self, label: &str, l: f64) -> Result<Self, FamilyError> {
        self.set_length(label, l)?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        let n = self.pants.len();
        if n == 0 {
            return Err(FamilyError::InvalidSpec("no pants".into()));
        }
        for p in &self.pants {
            for b in p {
                b.check()?;
            }
        }
        let mut glued = vec![[false; 3]; n];
        for (k, g) in self.gluings.iter().enumerate() {
            let ((i, j), (si, sj)) = (g.pants, g.slots);
            if i >= n || j >= n || si > 2 || sj > 2 || i == j {
                return Err(FamilyError::InvalidSpec(format!("gluing {k} refers to a missing slot")));
            }
            let (a, b) = (self.pants[i][si], self.pants[j][sj]);
            let (Some(la), Some(lb)) = (a.length(), b.length()) else {
                return Err(FamilyError::InvalidSpec(format!("gluing {k} joins a cusp")));
            };
            if la != lb {
                return Err(FamilyError::LengthMismatch { gluing: k, a: la, b: lb });
            }
            for (p, s) in [(i, si), (j, sj)] {
                if std::mem::replace(&mut glued[p][s], true) {
                    return Err(FamilyError::InvalidSpec(format!("slot {s} of pants {p} glued twice")));
                }
            }
        }
        for (p, row) in glued.iter().enumerate() {
            for (s, &g) in row.iter().enumerate() {
                if !g && self.pants[p][s] != BoundaryDatum::Cusp {
                    return Err(FamilyError::InvalidSpec(format!("open geodesic boundary at pants {p} slot {s}")));
                }
            }
        }
        let e = self.eisenstein_cusp;
        if e.pants != 0 || e.slot > 2 || self.pants[0][e.slot] != BoundaryDatum::Cusp || glued[0][e.slot] {
            return Err(FamilyError::InvalidSpec("the Eisenstein cusp must be a cusp slot of the first pants".into()));
        }
        for p in &self.pinching_labels {
            if p.gluing >= self.gluings.len() {
                return Err(FamilyError::InvalidSpec(format!("{} names a missing gluing", p.label)));
            }
        }
        Ok(())
    }
}
