use std::fmt;

use serde::{Deserialize, Serialize};

use super::disorder::DisorderRealization;
use super::hamiltonian::bond_hamiltonian;
use super::params::ModelParams;
use super::pauli::adjoint_action;
use crate::error::{Error, Result};
use crate::kernel::{hermitian_eigen, DenseMatrix, TruncationPolicy};
use crate::mps::{GateOutcome, MatrixProductChain, TruncationLedger};
use crate::scalar::{cis, Real};

/// Which object the schedule evolves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Picture {
    /// `|ψ⟩ ↦ e^{−iHτ}|ψ⟩` on a `d = 2` chain.
    State,
    /// `O ↦ e^{iHτ} O e^{−iHτ}` on a `d = 4` Pauli super-ket.
    Heisenberg,
}

impl Picture {
    pub fn local_dim(self) -> usize {
        match self {
            Picture::State => 2,
            Picture::Heisenberg => 4,
        }
    }
}

impl fmt::Display for Picture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Picture::State => "state",
            Picture::Heisenberg => "heisenberg",
        })
    }
}

#[derive(Clone, Debug)]
pub struct TwoSiteGate<T: Real> {
    pub bond: usize,
    /// `d² × d²`, acting on `s_bond · d + s_{bond+1}`.
    pub matrix: DenseMatrix<T>,
    pub duration: T,
}

impl<T: Real> TwoSiteGate<T> {
    pub fn apply_to(
        &self,
        chain: &mut MatrixProductChain<T>,
        policy: &TruncationPolicy<T>,
        ledger: &mut TruncationLedger<T>,
    ) -> Result<GateOutcome<T>> {
        chain.apply_two_site_gate(&self.matrix, self.bond, policy, ledger)
    }
}

/// One symmetric second-order Trotter step: odd bonds for τ/2, even bonds for
/// τ, odd bonds for τ/2 (bonds counted from 1, i.e. zero-based bonds
/// 0, 2, 4, … are "odd"). Gates inside a layer commute.
#[derive(Clone, Debug)]
pub struct TrotterSchedule<T: Real> {
    layers: Vec<Vec<TwoSiteGate<T>>>,
    tau: T,
    picture: Picture,
    n: usize,
}

impl<T: Real> TrotterSchedule<T> {
    pub fn layers(&self) -> &[Vec<TwoSiteGate<T>>] {
        &self.layers
    }

    /// Gates of one full step in application order.
    pub fn one_step(&self) -> impl Iterator<Item = &TwoSiteGate<T>> {
        self.layers.iter().flatten()
    }

    pub fn gates_per_step(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn picture(&self) -> Picture {
        self.picture
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Builds the gate sweep. Each state gate is `exp(−i h_b t)` from an exact
/// eigendecomposition of the bond term; Heisenberg gates are the adjoint
/// action of those unitaries, applied in reverse order so that composing
/// steps yields `U†(t) O U(t)`.
pub fn build_schedule<T: Real>(
    params: &ModelParams<T>,
    realization: &DisorderRealization<T>,
    picture: Picture,
) -> Result<TrotterSchedule<T>> {
    params.validate()?;
    let n = params.n;
    let half = params.tau * T::lit(0.5);
    let odd: Vec<usize> = (0..n - 1).step_by(2).collect();
    let even: Vec<usize> = (1..n - 1).step_by(2).collect();

    let bond_terms = (0..n - 1)
        .map(|b| hermitian_eigen(&bond_hamiltonian(params, realization, b)?))
        .collect::<Result<Vec<_>>>()?;

    let make = |bond: usize, duration: T| -> Result<TwoSiteGate<T>> {
        let u = bond_terms[bond].map_spectrum(|e| cis(-e * duration));
        let defect = u.unitarity_defect();
        if !(defect <= T::check_tolerance()) {
            return Err(Error::NonUnitaryGate { bond, deviation: defect.as_f64() });
        }
        let matrix = match picture {
            Picture::State => u,
            Picture::Heisenberg => {
                let m = adjoint_action(&u);
                check_real_orthogonal(&m, bond)?;
                m
            }
        };
        Ok(TwoSiteGate { bond, matrix, duration })
    };

    let mut layers = vec![
        odd.iter().map(|&b| make(b, half)).collect::<Result<Vec<_>>>()?,
        even.iter().map(|&b| make(b, params.tau)).collect::<Result<Vec<_>>>()?,
        odd.iter().map(|&b| make(b, half)).collect::<Result<Vec<_>>>()?,
    ];
    layers.retain(|l| !l.is_empty());
    if picture == Picture::Heisenberg {
        layers.reverse();
        for layer in &mut layers {
            layer.reverse();
        }
    }
    Ok(TrotterSchedule { layers, tau: params.tau, picture, n })
}

fn check_real_orthogonal<T: Real>(m: &DenseMatrix<T>, bond: usize) -> Result<()> {
    let imag = m.as_slice().iter().map(|z| z.im.abs()).fold(T::zero(), T::max);
    let defect = m.unitarity_defect().max(imag);
    if defect <= T::check_tolerance() {
        Ok(())
    } else {
        Err(Error::NonUnitaryGate { bond, deviation: defect.as_f64() })
    }
}
