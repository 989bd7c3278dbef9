use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use super::params::{FieldKind, ModelParams};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// One sample of the site fields `h_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct DisorderRealization<T> {
    pub seed: u64,
    /// Amplitude the fields were drawn with.
    pub h: T,
    pub fields: Vec<T>,
}

/// `n` i.i.d. uniform draws from `[−h, h]`, deterministic in `seed`.
pub fn sample_disorder<T: Real>(params: &ModelParams<T>, seed: u64) -> Result<DisorderRealization<T>> {
    if params.field != FieldKind::Random {
        return Err(Error::invalid(format!("sample_disorder needs a random field, got {}", params.field)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = params.h.as_f64();
    let fields = (0..params.n).map(|_| T::lit(h * rng.gen_range(-1.0..=1.0))).collect();
    Ok(DisorderRealization { seed, h: params.h, fields })
}

#[derive(Deserialize)]
struct Line {
    seed: u64,
    h: f64,
    n: usize,
    fields: Vec<f64>,
}

impl<T: Real> DisorderRealization<T> {
    /// Fields for any field kind; `seed` only matters for random fields.
    pub fn for_params(params: &ModelParams<T>, seed: u64) -> Result<Self> {
        params.validate()?;
        let fields = match params.field {
            FieldKind::Random => return sample_disorder(params, seed),
            FieldKind::Staggered => {
                let amp = params.h / T::lit(3.0).sqrt();
                // 1-based j: site 1 gets −h/√3
                (1..=params.n).map(|j| if j % 2 == 0 { amp } else { -amp }).collect()
            }
            FieldKind::Zero => vec![T::zero(); params.n],
        };
        Ok(Self { seed, h: params.h, fields })
    }

    pub fn n(&self) -> usize {
        self.fields.len()
    }

    /// `{"seed":…,"h":…,"n":…,"fields":[…]}` with 17 significant digits.
    pub fn to_json_line(&self) -> String {
        let fields: Vec<String> = self.fields.iter().map(|f| fmt17(f.as_f64())).collect();
        format!(
            "{{\"seed\":{},\"h\":{},\"n\":{},\"fields\":[{}]}}",
            self.seed,
            fmt17(self.h.as_f64()),
            self.fields.len(),
            fields.join(",")
        )
    }

    pub fn from_json_line(line: &str) -> Result<Self> {
        let parsed: Line = serde_json::from_str(line.trim()).map_err(|e| Error::Parse {
            source_name: "disorder realization".into(),
            message: e.to_string(),
        })?;
        if parsed.fields.len() != parsed.n {
            return Err(Error::Parse {
                source_name: "disorder realization".into(),
                message: format!("n = {} but {} fields", parsed.n, parsed.fields.len()),
            });
        }
        Ok(Self {
            seed: parsed.seed,
            h: T::lit(parsed.h),
            fields: parsed.fields.into_iter().map(T::lit).collect(),
        })
    }
}

/// Scientific notation with 17 significant digits: exact `f64` round trip.
pub(crate) fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}
