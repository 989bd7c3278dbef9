use serde::Serialize;

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GateRecord<T> {
    pub time: T,
    pub bond: usize,
    /// Discarded squared Schmidt weight of this gate.
    pub eta: T,
    /// Bond cap prevented meeting the per-gate threshold.
    pub capped: bool,
}

/// Per-gate truncation errors and their running sum `η_tot`.
#[derive(Clone, Debug, Default)]
pub struct TruncationLedger<T: Real> {
    records: Vec<GateRecord<T>>,
    eta_tot: T,
    now: T,
}

impl<T: Real> TruncationLedger<T> {
    pub fn new() -> Self {
        Self { records: Vec::new(), eta_tot: T::zero(), now: T::zero() }
    }

    /// Time stamp attached to subsequent records.
    pub fn set_time(&mut self, time: T) {
        self.now = time;
    }

    pub fn record(&mut self, bond: usize, eta: T, capped: bool) {
        let eta = eta.max(T::zero());
        self.eta_tot += eta;
        self.records.push(GateRecord { time: self.now, bond, eta, capped });
    }

    pub fn eta_tot(&self) -> T {
        self.eta_tot
    }

    pub fn records(&self) -> &[GateRecord<T>] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn capped_count(&self) -> usize {
        self.records.iter().filter(|r| r.capped).count()
    }
}
