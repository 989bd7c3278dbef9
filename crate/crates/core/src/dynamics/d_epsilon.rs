use crate::error::{Error, Result};
use crate::kernel::TruncationPolicy;
use crate::model::TrotterSchedule;
use crate::mps::MatrixProductChain;
use crate::scalar::Real;

use super::evolve::{step_count, Evolution};

/// Bond dimension needed to keep the accumulated truncation error below ε.
#[derive(Clone, Debug, PartialEq)]
pub struct DEpsilonCurve<T> {
    pub epsilon: T,
    /// `(t, D_ε(t))`: largest bond dimension used up to `t`.
    pub samples: Vec<(T, usize)>,
    /// The hard cap was reached and the run stopped early.
    pub truncated: bool,
    pub eta_tot: T,
}

impl<T: Real> DEpsilonCurve<T> {
    /// CSV with header `t,D`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,D\n");
        for (t, d) in &self.samples {
            out.push_str(&format!("{:.16e},{}\n", t.as_f64(), d));
        }
        out
    }
}

/// Evolves with an equal error budget per gate, `δ = ε / G`, where `G` is the
/// total number of gates up to `t_max`; hence `η_tot(t) ≤ ε` throughout.
/// Stops and flags the curve if a gate would need more than `hard_cap`.
pub fn measure_d_epsilon<T: Real>(
    schedule: &TrotterSchedule<T>,
    initial: MatrixProductChain<T>,
    t_max: T,
    epsilon: T,
    hard_cap: usize,
    sample_every: usize,
) -> Result<DEpsilonCurve<T>> {
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(Error::invalid(format!("ε must lie in (0, 1), got {epsilon}")));
    }
    if sample_every == 0 {
        return Err(Error::invalid("sample_every must be at least 1"));
    }
    let steps = step_count(t_max, schedule.tau())?;
    let total_gates = (steps * schedule.gates_per_step()).max(1);
    let policy = TruncationPolicy::new(hard_cap, epsilon / T::from_count(total_gates))?;
    let mut run = Evolution::new(initial, schedule, policy)?;
    let mut samples = vec![(run.time(), run.max_bond_seen())];
    let mut truncated = false;
    for k in 1..=steps {
        run.step()?;
        if run.capped_gates() > 0 {
            truncated = true;
            samples.push((run.time(), run.max_bond_seen()));
            break;
        }
        if k % sample_every == 0 || k == steps {
            samples.push((run.time(), run.max_bond_seen()));
        }
    }
    Ok(DEpsilonCurve { epsilon, samples, truncated, eta_tot: run.ledger().eta_tot() })
}
