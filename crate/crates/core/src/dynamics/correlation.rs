use crate::error::{Error, Result};
use crate::kernel::TruncationPolicy;
use crate::model::{Picture, TrotterSchedule};
use crate::mps::{MatrixProductChain, TruncationLedger, PAULI_I, PAULI_Z};
use crate::scalar::Real;

use super::evolve::{step_count, Evolution};

/// Isoline levels emitted alongside correlation grids.
pub const ISOLINE_LEVELS: [f64; 4] = [1e-8, 1e-6, 1e-4, 1e-2];

/// Zero-based index of the correlation origin, 1-based site `⌊n/4⌋`
/// (clamped to the first site for `n < 4`).
pub fn correlation_origin(n: usize) -> usize {
    (n / 4).max(1) - 1
}

/// Every offset that stays on the chain: `r ∈ [−origin, n − 1 − origin]`.
pub fn default_offsets(n: usize) -> Vec<isize> {
    let o = correlation_origin(n) as isize;
    (-o..n as isize - o).collect()
}

/// `C(r, t)` sampled on a (time × offset) grid; `values[ti][ri]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationGrid<T> {
    origin: usize,
    times: Vec<T>,
    offsets: Vec<isize>,
    values: Vec<Vec<T>>,
    skipped: Vec<isize>,
    pending_times: Vec<T>,
}

/// Furthest non-negative offset at which `|C| ≥ level`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Isoline<T> {
    pub time: T,
    pub level: f64,
    pub reach: Option<isize>,
}

impl<T: Real> CorrelationGrid<T> {
    /// An empty grid; rows pushed with [`push_row`](Self::push_row) take the
    /// listed `times` in order.
    pub fn new(origin: usize, times: Vec<T>, offsets: Vec<isize>, skipped: Vec<isize>) -> Self {
        Self { origin, times: Vec::with_capacity(times.len()), offsets, values: Vec::new(), skipped, pending_times: times }
    }

    pub fn push_row(&mut self, row: Vec<T>) {
        debug_assert_eq!(row.len(), self.offsets.len());
        let t = self.pending_times.get(self.times.len()).copied().unwrap_or_else(T::nan);
        self.times.push(t);
        self.values.push(row);
    }

    pub(crate) fn push_timed_row(&mut self, time: T, row: Vec<T>) {
        self.times.push(time);
        self.values.push(row);
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn offsets(&self) -> &[isize] {
        &self.offsets
    }

    pub fn values(&self) -> &[Vec<T>] {
        &self.values
    }

    /// Offsets dropped because `origin + r` fell off the chain.
    pub fn skipped(&self) -> &[isize] {
        &self.skipped
    }

    pub fn get(&self, time_index: usize, r: isize) -> Option<T> {
        let ri = self.offsets.iter().position(|&x| x == r)?;
        self.values.get(time_index).map(|row| row[ri])
    }

    /// Largest `|Σ_r C(r, t) − 1/4|` over sampled times; only meaningful when
    /// the offsets cover the whole chain.
    pub fn sum_rule_deviation(&self) -> T {
        let quarter = T::lit(0.25);
        self.values.iter().fold(T::zero(), |m, row| {
            let sum = row.iter().fold(T::zero(), |acc, &c| acc + c);
            m.max((sum - quarter).abs())
        })
    }

    /// CSV with header `t,r,C`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,r,C\n");
        for (t, row) in self.times.iter().zip(&self.values) {
            for (r, c) in self.offsets.iter().zip(row) {
                out.push_str(&format!("{:.16e},{},{:.16e}\n", t.as_f64(), r, c.as_f64()));
            }
        }
        out
    }

    pub fn isolines(&self, levels: &[f64]) -> Vec<Isoline<T>> {
        let mut out = Vec::new();
        for (t, row) in self.times.iter().zip(&self.values) {
            for &level in levels {
                let reach = self
                    .offsets
                    .iter()
                    .zip(row)
                    .filter(|(&r, c)| r >= 0 && c.abs().as_f64() >= level)
                    .map(|(&r, _)| r)
                    .max();
                out.push(Isoline { time: *t, level, reach });
            }
        }
        out
    }

    /// CSV with header `t,level,r` (levels in shortest form); `r` is empty when nothing reaches the level.
    pub fn isolines_csv(&self, levels: &[f64]) -> String {
        let mut out = String::from("t,level,r\n");
        for iso in self.isolines(levels) {
            let reach = iso.reach.map(|r| r.to_string()).unwrap_or_default();
            out.push_str(&format!("{:.16e},{:e},{}\n", iso.time.as_f64(), iso.level, reach));
        }
        out
    }
}

/// `C(r) = 2^{−n} tr(O s^z_{origin+r})` for a Heisenberg-evolved super-ket
/// `O` of `s^z_origin`, with its scale reapplied.
pub fn correlation_row<T: Real>(op_chain: &MatrixProductChain<T>, origin: usize, offsets: &[isize]) -> Result<Vec<T>> {
    if op_chain.local_dim() != 4 {
        return Err(Error::invalid("correlations need a d = 4 operator super-ket"));
    }
    let n = op_chain.len();
    let coeffs = op_chain.single_insertion_coefficients(PAULI_I, PAULI_Z)?;
    // ⟨⟨O|s^z_k⟩⟩ = ½ · scale · ⟨chain|Z_k⟩; coefficients are real for Hermitian O
    let factor = T::lit(0.5) * op_chain.scale();
    offsets
        .iter()
        .map(|&r| {
            let k = origin as isize + r;
            if k < 0 || k as usize >= n {
                return Err(Error::OutOfRange { what: "correlation site", index: k.max(0) as usize, len: n });
            }
            Ok(coeffs[k as usize].re * factor)
        })
        .collect()
}

/// Evolves `s^z_origin` in the Heisenberg picture and samples `C(r, t)` at
/// t = 0 and after every `sample_every` steps up to `t_max`.
pub fn correlation_trajectory<T: Real>(
    schedule: &TrotterSchedule<T>,
    policy: TruncationPolicy<T>,
    t_max: T,
    sample_every: usize,
    offsets: &[isize],
) -> Result<(CorrelationGrid<T>, TruncationLedger<T>, MatrixProductChain<T>)> {
    if schedule.picture() != Picture::Heisenberg {
        return Err(Error::invalid("correlations need a Heisenberg-picture schedule"));
    }
    if sample_every == 0 {
        return Err(Error::invalid("sample_every must be at least 1"));
    }
    let n = schedule.n();
    let origin = correlation_origin(n);
    let (valid, skipped): (Vec<isize>, Vec<isize>) = offsets.iter().partition(|&&r| {
        let k = origin as isize + r;
        k >= 0 && (k as usize) < n
    });
    let chain = MatrixProductChain::operator_superket_sz(n, origin)?;
    let mut grid = CorrelationGrid::new(origin, Vec::new(), valid.clone(), skipped);
    let steps = step_count(t_max, schedule.tau())?;
    let mut run = Evolution::new(chain, schedule, policy)?;
    grid.push_timed_row(run.time(), correlation_row(run.chain(), origin, &valid)?);
    for k in 1..=steps {
        run.step()?;
        if k % sample_every == 0 || k == steps {
            grid.push_timed_row(run.time(), correlation_row(run.chain(), origin, &valid)?);
        }
    }
    let (chain, ledger) = run.into_parts();
    Ok((grid, ledger, chain))
}
