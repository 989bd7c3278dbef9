use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    /// `h_j` i.i.d. uniform on `[−h, h]`.
    Random,
    /// `h_j = (−1)^j h/√3` (1-based `j`): same RMS as the uniform field.
    Staggered,
    Zero,
}

impl FromStr for FieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Self::Random),
            "staggered" => Ok(Self::Staggered),
            "zero" => Ok(Self::Zero),
            other => Err(Error::invalid(format!("unknown field kind '{other}'"))),
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Random => "random",
            Self::Staggered => "staggered",
            Self::Zero => "zero",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams<T> {
    pub n: usize,
    /// Anisotropy Δ.
    pub delta: T,
    /// Field amplitude h ≥ 0.
    pub h: T,
    pub field: FieldKind,
    /// Trotter step τ > 0.
    pub tau: T,
}

impl<T: Real> ModelParams<T> {
    pub fn new(n: usize, delta: T, h: T, field: FieldKind, tau: T) -> Result<Self> {
        let p = Self { n, delta, h, field, tau };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::invalid(format!("need at least 2 sites, got {}", self.n)));
        }
        if !(self.tau > T::zero()) || !self.tau.is_finite() {
            return Err(Error::invalid(format!("Trotter step must be positive, got {}", self.tau)));
        }
        if !(self.h >= T::zero()) || !self.h.is_finite() {
            return Err(Error::invalid(format!("field amplitude must be non-negative, got {}", self.h)));
        }
        if !self.delta.is_finite() {
            return Err(Error::invalid("anisotropy must be finite"));
        }
        Ok(())
    }
}
