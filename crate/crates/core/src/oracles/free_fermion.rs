use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::ed::split_offsets;
use crate::dynamics::{correlation_origin, CorrelationGrid};
use crate::error::{Error, Result};
use crate::kernel::DenseMatrix;
use crate::model::DisorderRealization;

/// Single-particle problem of the `Δ = 0` chain after the Jordan-Wigner
/// map: hopping `1/2` between neighbours, on-site energies `h_j`.
pub struct FreeFermionChain {
    energies: DVector<f64>,
    modes: DMatrix<f64>,
}

/// `U(t) = exp(−i H₁ t)`.
#[derive(Clone, Debug)]
pub struct SingleParticlePropagator {
    pub n: usize,
    pub matrix: DenseMatrix<f64>,
}

impl FreeFermionChain {
    pub fn new(fields: &[f64]) -> Result<Self> {
        let n = fields.len();
        if n < 2 {
            return Err(Error::invalid("need at least 2 sites"));
        }
        let h1 = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                fields[i]
            } else if i.abs_diff(j) == 1 {
                0.5
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(h1);
        Ok(Self { energies: eig.eigenvalues, modes: eig.eigenvectors })
    }

    pub fn n(&self) -> usize {
        self.energies.len()
    }

    pub fn propagator(&self, t: f64) -> SingleParticlePropagator {
        let n = self.n();
        let matrix = DenseMatrix::from_fn(n, n, |j, k| self.element(j, k, t));
        SingleParticlePropagator { n, matrix }
    }

    /// `U(t)_{jk} = Σ_a V_{ja} V_{ka} e^{−i E_a t}`.
    pub fn element(&self, j: usize, k: usize, t: f64) -> Complex64 {
        (0..self.n())
            .map(|a| Complex64::from_polar(self.modes[(j, a)] * self.modes[(k, a)], -self.energies[a] * t))
            .sum()
    }

    /// Infinite-temperature `C(r, t) = |U(t)_{j, j+r}|² / 4` (Wick's theorem
    /// with `s^z = n − 1/2`).
    pub fn correlation(&self, origin: usize, times: &[f64], offsets: &[isize]) -> CorrelationGrid<f64> {
        let n = self.n();
        let (valid, skipped) = split_offsets(origin, offsets, n);
        let mut grid = CorrelationGrid::new(origin, times.to_vec(), valid.clone(), skipped);
        for &t in times {
            // row `origin` of U(t)
            let phases: Vec<Complex64> = (0..n)
                .map(|a| Complex64::from_polar(self.modes[(origin, a)], -self.energies[a] * t))
                .collect();
            let row = valid
                .iter()
                .map(|&r| {
                    let k = (origin as isize + r) as usize;
                    let u: Complex64 = (0..n).map(|a| phases[a] * self.modes[(k, a)]).sum();
                    u.norm_sqr() / 4.0
                })
                .collect();
            grid.push_row(row);
        }
        grid
    }
}

pub fn free_fermion_correlation(
    realization: &DisorderRealization<f64>,
    times: &[f64],
    offsets: &[isize],
) -> Result<CorrelationGrid<f64>> {
    let chain = FreeFermionChain::new(&realization.fields)?;
    Ok(chain.correlation(correlation_origin(realization.n()), times, offsets))
}
