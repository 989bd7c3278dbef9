use crate::error::{Error, Result};
use crate::kernel::TruncationPolicy;
use crate::model::TrotterSchedule;
use crate::mps::{avg_entropy_over_cuts, max_entropy_over_cuts, MatrixProductChain, TruncationLedger};
use crate::scalar::Real;

/// Rényi indices recorded by default: `S_{1/2}` and the von Neumann `S_1`.
pub const DEFAULT_ALPHAS: [f64; 2] = [0.5, 1.0];

#[derive(Clone, Debug, PartialEq)]
pub struct EntropySample<T> {
    pub alpha: T,
    /// Cut with the largest entropy and its value.
    pub max_cut: usize,
    pub max: T,
    /// Mean over all `n − 1` cuts.
    pub avg: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord<T> {
    pub time: T,
    pub entropies: Vec<EntropySample<T>>,
    pub max_bond_dim: usize,
    pub eta_tot: T,
    pub log_scale: T,
}

impl<T: Real> TrajectoryRecord<T> {
    pub fn entropy(&self, alpha: T) -> Option<&EntropySample<T>> {
        self.entropies.iter().find(|e| e.alpha == alpha)
    }

    /// `{"t","S_half_max","S_half_avg","S_1_max","S_1_avg","maxD","eta_tot"}`.
    pub fn to_json_line(&self) -> String {
        let pick = |alpha: f64| {
            self.entropy(T::lit(alpha))
                .map(|e| (fmt(e.max), fmt(e.avg)))
                .unwrap_or_else(|| ("null".into(), "null".into()))
        };
        let (half_max, half_avg) = pick(0.5);
        let (one_max, one_avg) = pick(1.0);
        format!(
            "{{\"t\":{},\"S_half_max\":{},\"S_half_avg\":{},\"S_1_max\":{},\"S_1_avg\":{},\"maxD\":{},\"eta_tot\":{}}}",
            fmt(self.time),
            half_max,
            half_avg,
            one_max,
            one_avg,
            self.max_bond_dim,
            fmt(self.eta_tot)
        )
    }
}

fn fmt<T: Real>(x: T) -> String {
    format!("{:.16e}", x.as_f64())
}

/// Stepwise driver owning a chain and its truncation ledger.
pub struct Evolution<'s, T: Real> {
    chain: MatrixProductChain<T>,
    schedule: &'s TrotterSchedule<T>,
    policy: TruncationPolicy<T>,
    ledger: TruncationLedger<T>,
    steps: usize,
    max_bond_seen: usize,
    capped_gates: usize,
}

impl<'s, T: Real> Evolution<'s, T> {
    pub fn new(chain: MatrixProductChain<T>, schedule: &'s TrotterSchedule<T>, policy: TruncationPolicy<T>) -> Result<Self> {
        if chain.local_dim() != schedule.picture().local_dim() {
            return Err(Error::invalid(format!(
                "chain has local dimension {} but the schedule evolves the {} picture",
                chain.local_dim(),
                schedule.picture()
            )));
        }
        if chain.len() != schedule.n() {
            return Err(Error::invalid(format!("chain has {} sites, schedule {}", chain.len(), schedule.n())));
        }
        let max_bond_seen = chain.max_bond_dim();
        Ok(Self { chain, schedule, policy, ledger: TruncationLedger::new(), steps: 0, max_bond_seen, capped_gates: 0 })
    }

    pub fn time(&self) -> T {
        T::from_count(self.steps) * self.schedule.tau()
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn chain(&self) -> &MatrixProductChain<T> {
        &self.chain
    }

    pub fn ledger(&self) -> &TruncationLedger<T> {
        &self.ledger
    }

    /// Largest bond dimension produced by any gate so far.
    pub fn max_bond_seen(&self) -> usize {
        self.max_bond_seen
    }

    /// Gates whose threshold could not be met under the bond cap.
    pub fn capped_gates(&self) -> usize {
        self.capped_gates
    }

    /// Advances by one Trotter step τ.
    pub fn step(&mut self) -> Result<()> {
        self.ledger.set_time(T::from_count(self.steps + 1) * self.schedule.tau());
        let n = self.chain.len();
        for layer in self.schedule.layers() {
            // sweep away from the end the center is closest to
            let forward = self.chain.center() <= n / 2;
            let mut apply = |gate: &crate::model::TwoSiteGate<T>| -> Result<()> {
                let out = gate.apply_to(&mut self.chain, &self.policy, &mut self.ledger)?;
                self.max_bond_seen = self.max_bond_seen.max(out.bond_dim);
                if out.capped {
                    self.capped_gates += 1;
                }
                Ok(())
            };
            if forward {
                layer.iter().try_for_each(&mut apply)?;
            } else {
                layer.iter().rev().try_for_each(&mut apply)?;
            }
        }
        self.steps += 1;
        Ok(())
    }

    pub fn record(&self, alphas: &[T]) -> Result<TrajectoryRecord<T>> {
        let spectra = self.chain.schmidt_spectra()?;
        let entropies = alphas
            .iter()
            .map(|&alpha| {
                let (max_cut, max) = max_entropy_over_cuts(&spectra, alpha)?;
                let avg = avg_entropy_over_cuts(&spectra, alpha)?;
                Ok(EntropySample { alpha, max_cut, max, avg })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TrajectoryRecord {
            time: self.time(),
            entropies,
            max_bond_dim: self.chain.max_bond_dim(),
            eta_tot: self.ledger.eta_tot(),
            log_scale: self.chain.log_scale(),
        })
    }

    pub fn into_parts(self) -> (MatrixProductChain<T>, TruncationLedger<T>) {
        (self.chain, self.ledger)
    }
}

/// Result of [`evolve`].
#[derive(Clone, Debug)]
pub struct Trajectory<T: Real> {
    pub records: Vec<TrajectoryRecord<T>>,
    pub ledger: TruncationLedger<T>,
    pub chain: MatrixProductChain<T>,
    pub capped_gates: usize,
}

/// Number of τ steps covering `[0, t_max]`.
pub(crate) fn step_count<T: Real>(t_max: T, tau: T) -> Result<usize> {
    if !(t_max >= T::zero()) || !t_max.is_finite() {
        return Err(Error::invalid(format!("t_max must be finite and non-negative, got {t_max}")));
    }
    let ratio = (t_max / tau).as_f64();
    Ok((ratio - 1e-9).ceil().max(0.0) as usize)
}

/// Runs `⌈t_max/τ⌉` steps, recording after every `sample_every` steps (and at
/// t = 0 and the final step). Capped gates do not abort the run; they are
/// visible in the ledger and in `capped_gates`.
pub fn evolve<T: Real>(
    chain: MatrixProductChain<T>,
    schedule: &TrotterSchedule<T>,
    t_max: T,
    policy: TruncationPolicy<T>,
    sample_every: usize,
) -> Result<Trajectory<T>> {
    if sample_every == 0 {
        return Err(Error::invalid("sample_every must be at least 1"));
    }
    let steps = step_count(t_max, schedule.tau())?;
    let alphas: Vec<T> = DEFAULT_ALPHAS.iter().map(|&a| T::lit(a)).collect();
    let mut run = Evolution::new(chain, schedule, policy)?;
    let mut records = vec![run.record(&alphas)?];
    for k in 1..=steps {
        run.step()?;
        if k % sample_every == 0 || k == steps {
            records.push(run.record(&alphas)?);
        }
    }
    let capped_gates = run.capped_gates();
    let (chain, ledger) = run.into_parts();
    Ok(Trajectory { records, ledger, chain, capped_gates })
}
