use std::collections::BTreeMap;
use std::path::Path;

use eisenstein::SpectralParameter;
use hyperbolic_core::SYMMETRIC_COLLAR_LENGTH;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use surface_families::{BasepointSpec, ChainFamilySpec};

use crate::ExperimentError;

/// Fewest grid points a slope is fitted on.
pub const MIN_GRID_POINTS: usize = 4;

/// A builtin family name, a path to a spec file, or an inline spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FamilySource {
    Name(String),
    Spec(ChainFamilySpec),
}

impl FamilySource {
    pub fn resolve(&self) -> Result<ChainFamilySpec, ExperimentError> {
        Ok(match self {
            Self::Name(n) => ChainFamilySpec::load(n)?,
            Self::Spec(s) => s.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub family: FamilySource,
    /// Lengths per varied pinching label. Each label is swept on its own
    /// with the other lengths held at `fixed`, or at the spec's value.
    #[serde(rename = "L_grid")]
    pub l_grid: BTreeMap<String, Vec<f64>>,
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
    #[serde(serialize_with = "ser_params", deserialize_with = "de_params")]
    pub s_values: Vec<SpectralParameter>,
    pub basepoints: Vec<BasepointSpec>,
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
    /// Generator order handed to the enumeration, new position `k`
    /// holding old generator `order[k]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator_order: Option<Vec<usize>>,
}

/// Slopes are fitted over a factor of ~4 in `L`, so a relative error of
/// `1e-4` moves them by well under a hundredth.
fn default_rel_tol() -> f64 {
    1e-4
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ParamRepr {
    Real(f64),
    Text(String),
}

fn de_params<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<SpectralParameter>, D::Error> {
    let raw = Vec::<ParamRepr>::deserialize(d)?;
    raw.into_iter()
        .map(|r| match r {
            ParamRepr::Real(x) => SpectralParameter::real(x),
            ParamRepr::Text(t) => t.parse(),
        })
        .collect::<Result<_, _>>()
        .map_err(serde::de::Error::custom)
}

fn ser_params<S: Serializer>(v: &[SpectralParameter], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|p| p.to_string()))
}

impl SweepConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Thick-part and collar sweeps of a builtin family on its default
    /// grid at `s ∈ {2, 3}`.
    pub fn builtin_default(name: &str) -> Result<Self, ExperimentError> {
        let spec = ChainFamilySpec::builtin(name)
            .ok_or_else(|| ExperimentError::InvalidConfig(format!("no builtin family {name}")))?;
        let s_values = vec![SpectralParameter::real(2.0)?, SpectralParameter::real(3.0)?];
        let mut l_grid = BTreeMap::new();
        let mut fixed = BTreeMap::new();
        let basepoints = if spec.pinching_labels.len() == 1 {
            l_grid.insert("gamma1".into(), vec![0.5, 0.35, 0.25, 0.18, 0.12]);
            vec![BasepointSpec::thick("S2"), BasepointSpec::collar("gamma1", 0.0, "S2")]
        } else {
            for l in ["gamma1", "gamma2"] {
                l_grid.insert(l.into(), vec![0.5, 0.35, 0.25, 0.18]);
                fixed.insert(l.into(), 0.35);
            }
            vec![BasepointSpec::thick("S3"), BasepointSpec::collar("gamma2", 1.0, "S2")]
        };
        Ok(Self {
            family: FamilySource::Name(name.into()),
            l_grid,
            fixed,
            s_values,
            basepoints,
            rel_tol: default_rel_tol(),
            output_path: None,
            generator_order: None,
        })
    }

    pub fn validate(&self) -> Result<ChainFamilySpec, ExperimentError> {
        let bad = |m: String| Err(ExperimentError::InvalidConfig(m));
        let spec = self.family.resolve()?;
        spec.validate()?;
        if self.l_grid.is_empty() {
            return bad("empty length grid".into());
        }
        for (label, grid) in &self.l_grid {
            spec.gluing_of(label)?;
            if grid.len() < MIN_GRID_POINTS {
                return bad(format!("{label}: {} grid points, need {MIN_GRID_POINTS}", grid.len()));
            }
            if grid.windows(2).any(|w| !(w[1] < w[0])) {
                return bad(format!("{label}: grid is not strictly decreasing"));
            }
            if let Some(l) = grid.iter().find(|&&l| !(l > 0.0 && l < SYMMETRIC_COLLAR_LENGTH)) {
                return bad(format!("{label}: length {l} outside (0, 2 asinh 1)"));
            }
        }
        for (label, &l) in &self.fixed {
            spec.gluing_of(label)?;
            if !(l > 0.0) {
                return bad(format!("{label}: fixed length {l} is not positive"));
            }
        }
        if self.s_values.is_empty() {
            return bad("no spectral parameters".into());
        }
        for s in &self.s_values {
            s.check()?;
        }
        if self.basepoints.is_empty() {
            return bad("no basepoints".into());
        }
        for b in &self.basepoints {
            b.validate()?;
        }
        if !(self.rel_tol > 0.0) {
            return bad(format!("relative tolerance {}", self.rel_tol));
        }
        Ok(spec)
    }
}
