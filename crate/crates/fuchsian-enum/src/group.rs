use std::fmt;

use hyperbolic_core::Mobius;

use crate::EnumError;

#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub label: String,
    pub matrix: Mobius,
}

/// A letter of a word: generator index and sign of the exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn inv(self) -> Letter {
        Letter { gen: self.gen, inverse: !self.inverse }
    }
}

/// Finitely generated Fuchsian group with a designated `z ↦ z + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupPresentation {
    pub generators: Vec<Generator>,
    /// Index of the generator fixing ∞.
    pub parabolic: usize,
    pub contains_minus_identity: bool,
    pub cusp_width_normalized: bool,
    /// Hyperbolic area of the quotient when known; used by the completeness
    /// certificate of the enumeration.
    pub covolume: Option<f64>,
}

/// Matrix tolerance for recognizing the normalized cusp generator.
const CUSP_TOL: f64 = 1e-9;

impl GroupPresentation {
    /// Builds a presentation. The generator labelled `parabolic` must be
    /// `±(1 1; 0 1)` or its inverse for the width-one flag to be set.
    pub fn new(gens: Vec<(String, Mobius)>, parabolic: &str) -> Result<Self, EnumError> {
        let idx = gens
            .iter()
            .position(|(l, _)| l == parabolic)
            .ok_or_else(|| EnumError::UnknownLabel(parabolic.to_string()))?;
        let mut generators: Vec<Generator> =
            gens.into_iter().map(|(label, matrix)| Generator { label, matrix }).collect();
        let p = generators[idx].matrix;
        let t = Mobius::translation(1.0);
        let normalized = if p.approx_eq(&t, CUSP_TOL) {
            generators[idx].matrix = t;
            true
        } else if p.approx_eq(&t.inverse(), CUSP_TOL) {
            generators[idx].matrix = t.inverse();
            true
        } else {
            false
        };
        Ok(Self {
            generators,
            parabolic: idx,
            contains_minus_identity: false,
            cusp_width_normalized: normalized,
            covolume: None,
        })
    }

    pub fn with_covolume(mut self, area: f64) -> Self {
        self.covolume = Some(area);
        self
    }

    /// `⟨z ↦ z + 1⟩`.
    pub fn gamma_infinity() -> Self {
        Self::new(vec![("T".into(), Mobius::translation(1.0))], "T").unwrap()
    }

    /// `PSL(2, ℤ)` generated by `S: z ↦ -1/z` and `T: z ↦ z + 1`.
    pub fn modular() -> Self {
        let mut g = Self::new(vec![("S".into(), Mobius::inversion()), ("T".into(), Mobius::translation(1.0))], "T")
            .unwrap()
            .with_covolume(std::f64::consts::PI / 3.0);
        g.contains_minus_identity = true;
        g
    }

    /// Principal congruence subgroup of level two, conjugated by `z ↦ z/2`
    /// so that its cusp at ∞ has width one. Bottom rows are `(c, d)` with
    /// `4 | c`, `d` odd.
    pub fn gamma2_normalized() -> Self {
        let mut g =
            Self::new(vec![("A".into(), Mobius::translation(1.0)), ("B".into(), Mobius::new(1.0, 0.0, 4.0, 1.0))], "A")
                .unwrap()
                .with_covolume(2.0 * std::f64::consts::PI);
        g.contains_minus_identity = true;
        g
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.label == label)
    }

    pub fn letter_matrix(&self, l: Letter) -> Mobius {
        let m = self.generators[l.gen].matrix;
        if l.inverse {
            m.inverse()
        } else {
            m
        }
    }

    pub fn eval_word(&self, w: &[Letter]) -> Mobius {
        w.iter().fold(Mobius::IDENTITY, |acc, &l| acc.compose(&self.letter_matrix(l)))
    }

    /// All letters, generators first then inverses, in generator order.
    pub fn letters(&self) -> Vec<Letter> {
        let n = self.generators.len();
        (0..n)
            .map(|gen| Letter { gen, inverse: false })
            .chain((0..n).map(|gen| Letter { gen, inverse: true }))
            .collect()
    }

    /// Same group with generators sorted by label. Enumeration works on this
    /// form so its output does not depend on the input order.
    pub fn sorted_by_label(&self) -> Self {
        let mut idx: Vec<usize> = (0..self.generators.len()).collect();
        idx.sort_by(|&i, &j| self.generators[i].label.cmp(&self.generators[j].label));
        self.permuted(&idx)
    }

    /// Reorders generators: new position `k` holds old generator `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let generators = order.iter().map(|&i| self.generators[i].clone()).collect();
        let parabolic = order.iter().position(|&i| i == self.parabolic).unwrap();
        Self { generators, parabolic, ..self.clone() }
    }

    /// Labels of generators whose determinant is off by more than `tol`
    /// relative to the entry scale.
    pub fn determinant_defects(&self, tol: f64) -> Vec<(String, f64)> {
        self.generators
            .iter()
            .filter_map(|g| {
                let det = g.matrix.det();
                let scale = g.matrix.max_abs().powi(2).max(1.0);
                ((det - 1.0).abs() > tol * scale).then(|| (g.label.clone(), det))
            })
            .collect()
    }

    /// Parses the plain-text group format: `label a b c d` per line and
    /// `# parabolic <label>` naming the generator fixing ∞.
    pub fn parse(text: &str) -> Result<Self, EnumError> {
        let mut gens = Vec::new();
        let mut parabolic = None;
        let mut covolume = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let mut toks = rest.split_whitespace();
                match toks.next() {
                    Some("parabolic") => {
                        parabolic = Some(
                            toks.next()
                                .ok_or_else(|| EnumError::Parse(lineno + 1, "missing label".into()))?
                                .to_string(),
                        );
                    }
                    Some("covolume") => {
                        let v = toks
                            .next()
                            .and_then(|t| t.parse::<f64>().ok())
                            .ok_or_else(|| EnumError::Parse(lineno + 1, "bad covolume".into()))?;
                        covolume = Some(v);
                    }
                    _ => {}
                }
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 5 {
                return Err(EnumError::Parse(lineno + 1, format!("expected 5 fields, got {}", toks.len())));
            }
            let mut v = [0.0; 4];
            for k in 0..4 {
                v[k] = toks[k + 1]
                    .parse()
                    .map_err(|_| EnumError::Parse(lineno + 1, format!("bad number {:?}", toks[k + 1])))?;
            }
            gens.push((toks[0].to_string(), Mobius::new(v[0], v[1], v[2], v[3])));
        }
        let p = parabolic.ok_or_else(|| EnumError::Parse(0, "no '# parabolic' line".into()))?;
        let mut g = Self::new(gens, &p)?;
        g.covolume = covolume;
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for g in &self.generators {
            let m = g.matrix;
            s.push_str(&format!("{} {:?} {:?} {:?} {:?}\n", g.label, m.a, m.b, m.c, m.d));
        }
        s.push_str(&format!("# parabolic {}\n", self.generators[self.parabolic].label));
        if let Some(a) = self.covolume {
            s.push_str(&format!("# covolume {a:?}\n"));
        }
        s
    }
}

/// A word in the generators of a presentation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        Word(v)
    }

    pub fn display<'a>(&'a self, g: &'a GroupPresentation) -> WordDisplay<'a> {
        WordDisplay { w: self, g }
    }

    pub fn parse(s: &str, g: &GroupPresentation) -> Result<Word, EnumError> {
        let mut v = Vec::new();
        for tok in s.split_whitespace() {
            let (label, inverse) = match tok.strip_suffix("^-1") {
                Some(l) => (l, true),
                None => (tok, false),
            };
            let gen = g.label_index(label).ok_or_else(|| EnumError::UnknownLabel(label.into()))?;
            v.push(Letter { gen, inverse });
        }
        Ok(Word(v))
    }
}

pub struct WordDisplay<'a> {
    w: &'a Word,
    g: &'a GroupPresentation,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.w.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", self.g.generators[l.gen].label)?;
            if l.inverse {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        let g = GroupPresentation::modular();
        let h = GroupPresentation::parse(&g.to_text()).unwrap();
        assert_eq!(h.generators, g.generators);
        assert_eq!(h.parabolic, 1);
        assert!(h.cusp_width_normalized);
        assert_eq!(h.covolume, g.covolume);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(GroupPresentation::parse("S 0 -1 1 0\n"), Err(EnumError::Parse(..))));
        assert!(matches!(GroupPresentation::parse("S 0 -1 1\n# parabolic S"), Err(EnumError::Parse(1, _))));
        assert!(matches!(GroupPresentation::parse("S 0 -1 1 0\n# parabolic T"), Err(EnumError::UnknownLabel(_))));
    }

    #[test]
    fn width_flag() {
        let g = GroupPresentation::parse("P 1 2 0 1\n# parabolic P").unwrap();
        assert!(!g.cusp_width_normalized);
        let g = GroupPresentation::parse("P -1 1 0 -1\n# parabolic P").unwrap();
        assert!(g.cusp_width_normalized);
    }

    #[test]
    fn words() {
        let g = GroupPresentation::modular();
        let w = Word::parse("S T S^-1", &g).unwrap();
        assert_eq!(w.display(&g).to_string(), "S T S^-1");
        let m = g.eval_word(&w.0);
        assert!(m.compose(&g.eval_word(&w.inverse().0)).is_identity(1e-14));
    }

    #[test]
    fn sorting_is_a_permutation() {
        let g = GroupPresentation::modular().permuted(&[1, 0]);
        assert_eq!(g.generators[0].label, "T");
        let s = g.sorted_by_label();
        assert_eq!(s.generators[0].label, "S");
        assert_eq!(s.parabolic, 1);
    }

    #[test]
    fn determinant_defect_detected() {
        let mut g = GroupPresentation::modular();
        g.generators[0].matrix.b = -2.0;
        assert_eq!(g.determinant_defects(1e-9).len(), 1);
        assert!(GroupPresentation::modular().determinant_defects(1e-12).is_empty());
    }
}
