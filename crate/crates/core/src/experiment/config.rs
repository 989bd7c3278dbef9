use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::TruncationPolicy;
use crate::model::{FieldKind, ModelParams, Picture};
use crate::oracles::ED_MAX_SITES;

/// What a run computes per realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Random product state evolved in the Schrödinger picture; entropy trajectory.
    Pure,
    /// `s^z` super-ket evolved in the Heisenberg picture; operator-space entropy trajectory.
    Operator,
    /// Bond dimension needed for a total truncation error below ε.
    DEpsilon,
    /// `C(r, t)` from the evolved `s^z` super-ket.
    Correlation,
    /// `C(r, t)` from the single-particle propagator (Δ = 0 only).
    FfCorrelation,
    /// tDMRG against exact diagonalization (small `n`).
    EdCheck,
}

impl Mode {
    pub const ALL: [Mode; 6] = [
        Mode::Pure,
        Mode::Operator,
        Mode::DEpsilon,
        Mode::Correlation,
        Mode::FfCorrelation,
        Mode::EdCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Pure => "pure",
            Mode::Operator => "operator",
            Mode::DEpsilon => "d_epsilon",
            Mode::Correlation => "correlation",
            Mode::FfCorrelation => "ff_correlation",
            Mode::EdCheck => "ed_check",
        }
    }

    /// Whether each realization is repeated over several initial states.
    pub fn uses_states(self, picture: Picture) -> bool {
        match self {
            Mode::Pure | Mode::EdCheck => true,
            Mode::DEpsilon => picture == Picture::State,
            Mode::Operator | Mode::Correlation | Mode::FfCorrelation => false,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s || m.name().replace('_', "-") == s)
            .ok_or_else(|| Error::invalid(format!("unknown mode '{s}'")))
    }
}

/// Full description of an ensemble run. Every field has a default so partial
/// TOML files and CLI overrides compose.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub n: usize,
    /// Anisotropy Δ.
    pub delta: f64,
    /// Field amplitude.
    pub h: f64,
    pub field: FieldKind,
    /// Trotter step τ.
    pub tau: f64,
    pub t_max: f64,
    /// Steps between recorded samples.
    pub sample_every: usize,
    /// Bond-dimension cap for fixed-policy runs.
    pub max_d: usize,
    /// Per-gate discarded-weight threshold δ.
    pub delta_trunc: f64,
    /// Total error budget for `d_epsilon`.
    pub epsilon: f64,
    /// Bond dimension at which a `d_epsilon` run gives up.
    pub hard_cap: usize,
    /// Evolution picture for `d_epsilon`.
    pub picture: Picture,
    pub realizations: usize,
    pub states_per_realization: usize,
    /// Master seed; all realization and state seeds derive from it.
    pub seed: u64,
    pub threads: usize,
    pub out: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Pure,
            n: 20,
            delta: 0.5,
            h: 5.0,
            field: FieldKind::Random,
            tau: 0.05,
            t_max: 10.0,
            sample_every: 20,
            max_d: 64,
            delta_trunc: 1e-10,
            epsilon: 1e-5,
            hard_cap: 1024,
            picture: Picture::State,
            realizations: 1,
            states_per_realization: 1,
            seed: 1,
            threads: 1,
            out: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str, source_name: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Parse {
            source_name: source_name.to_string(),
            message: e.message().to_string(),
        })?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::File {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::from_toml_str(&text, &path.display().to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config fields are TOML-representable")
    }

    pub fn model(&self) -> Result<ModelParams<f64>> {
        ModelParams::new(self.n, self.delta, self.h, self.field, self.tau)
    }

    pub fn policy(&self) -> Result<TruncationPolicy<f64>> {
        TruncationPolicy::new(self.max_d, self.delta_trunc)
    }

    /// Initial states per realization actually used by the mode.
    pub fn states(&self) -> usize {
        if self.mode.uses_states(self.picture) {
            self.states_per_realization
        } else {
            1
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model()?;
        if !(self.t_max >= 0.0 && self.t_max.is_finite()) {
            return Err(Error::invalid(format!("t_max must be finite and non-negative, got {}", self.t_max)));
        }
        if self.sample_every == 0 {
            return Err(Error::invalid("sample_every must be at least 1"));
        }
        if self.realizations == 0 {
            return Err(Error::invalid("realizations must be at least 1"));
        }
        if self.states_per_realization == 0 {
            return Err(Error::invalid("states_per_realization must be at least 1"));
        }
        if self.threads == 0 {
            return Err(Error::invalid("threads must be at least 1"));
        }
        match self.mode {
            Mode::Pure | Mode::Operator | Mode::Correlation | Mode::EdCheck => {
                self.policy()?;
            }
            Mode::DEpsilon => {
                if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
                    return Err(Error::invalid(format!("epsilon must lie in (0, 1), got {}", self.epsilon)));
                }
                if self.hard_cap == 0 {
                    return Err(Error::invalid("hard_cap must be at least 1"));
                }
            }
            Mode::FfCorrelation => {
                if self.delta != 0.0 {
                    return Err(Error::invalid(format!(
                        "ff_correlation is exact only at delta = 0, got {}",
                        self.delta
                    )));
                }
            }
        }
        if self.mode == Mode::EdCheck && self.n > ED_MAX_SITES {
            return Err(Error::TooLarge { n: self.n, limit: ED_MAX_SITES });
        }
        Ok(())
    }
}
