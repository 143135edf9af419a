use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::EisError;

/// `s = sigma + i tau` with `sigma > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParameter {
    pub sigma: f64,
    pub tau: f64,
}

impl SpectralParameter {
    pub fn new(sigma: f64, tau: f64) -> Result<Self, EisError> {
        if !(sigma > 1.0) || !tau.is_finite() {
            return Err(EisError::ConvergenceRegime { sigma });
        }
        Ok(Self { sigma, tau })
    }

    pub fn real(sigma: f64) -> Result<Self, EisError> {
        Self::new(sigma, 0.0)
    }

    pub fn is_real(&self) -> bool {
        self.tau == 0.0
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.sigma, self.tau)
    }

    pub fn check(&self) -> Result<(), EisError> {
        Self::new(self.sigma, self.tau).map(|_| ())
    }

    /// `h^s = exp(s log h)` for `h > 0`.
    pub fn power(&self, h: f64) -> Complex64 {
        if self.tau == 0.0 {
            Complex64::new(h.powf(self.sigma), 0.0)
        } else {
            let l = h.ln();
            Complex64::from_polar((self.sigma * l).exp(), self.tau * l)
        }
    }
}

impl fmt::Display for SpectralParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tau == 0.0 {
            write!(f, "{}", self.sigma)
        } else if self.tau < 0.0 {
            write!(f, "{}-{}i", self.sigma, -self.tau)
        } else {
            write!(f, "{}+{}i", self.sigma, self.tau)
        }
    }
}

/// Accepts `"2"`, `"2.5+1i"`, `"3-0.5i"` or `"2,1"`.
impl FromStr for SpectralParameter {
    type Err = EisError;

    fn from_str(s: &str) -> Result<Self, EisError> {
        let t = s.trim().replace(' ', "");
        let bad = || EisError::Parse(s.to_string());
        let (re, im) = if let Some((a, b)) = t.split_once(',') {
            (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?)
        } else if let Some(body) = t.strip_suffix('i') {
            // split at the last sign that is not an exponent sign
            let bytes = body.as_bytes();
            let pos = (1..bytes.len())
                .rev()
                .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'))
                .ok_or_else(bad)?;
            let im: f64 = match &body[pos..] {
                "+" => 1.0,
                "-" => -1.0,
                v => v.parse().map_err(|_| bad())?,
            };
            (body[..pos].parse().map_err(|_| bad())?, im)
        } else {
            (t.parse().map_err(|_| bad())?, 0.0)
        };
        Self::new(re, im)
    }
}
