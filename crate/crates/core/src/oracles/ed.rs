use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::dynamics::{correlation_origin, CorrelationGrid};
use crate::error::{Error, Result};
use crate::kernel::DenseMatrix;
use crate::model::{DisorderRealization, ModelParams};

/// Largest chain the dense engine accepts.
pub const ED_MAX_SITES: usize = 12;

/// Dense state vector; site 0 is the most significant bit, bit value 0 is
/// spin up.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    pub n: usize,
    pub amplitudes: Vec<Complex64>,
}

impl DenseState {
    pub fn new(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if n > ED_MAX_SITES {
            return Err(Error::TooLarge { n, limit: ED_MAX_SITES });
        }
        if amplitudes.len() != 1 << n {
            return Err(Error::invalid(format!("{} amplitudes for {n} sites", amplitudes.len())));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::invalid("zero state"));
        }
        Ok(Self { n, amplitudes: amplitudes.into_iter().map(|z| z / norm).collect() })
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        *amps.get_mut(index).ok_or(Error::OutOfRange { what: "basis index", index, len: 1 << n })? =
            Complex64::new(1.0, 0.0);
        Self::new(n, amps)
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &Self) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨s^z_site⟩`.
    pub fn sz(&self, site: usize) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(idx, a)| a.norm_sqr() * sz_of(idx, site, self.n))
            .sum()
    }
}

#[inline]
fn sz_of(index: usize, site: usize, n: usize) -> f64 {
    if (index >> (n - 1 - site)) & 1 == 0 {
        0.5
    } else {
        -0.5
    }
}

struct Sector {
    basis: Vec<usize>,
    energies: DVector<f64>,
    vectors: DMatrix<f64>,
}

/// Exact spectrum of the chain, block-diagonalized by total `S^z`.
pub struct ExactXxz {
    n: usize,
    delta: f64,
    fields: Vec<f64>,
    sectors: Vec<Sector>,
}

impl ExactXxz {
    pub fn new(n: usize, delta: f64, fields: &[f64]) -> Result<Self> {
        if n > ED_MAX_SITES {
            return Err(Error::TooLarge { n, limit: ED_MAX_SITES });
        }
        if n < 2 || fields.len() != n {
            return Err(Error::invalid(format!("need n ≥ 2 and n fields, got n={n}, {} fields", fields.len())));
        }
        let mut position = vec![0usize; 1 << n];
        let mut sectors = Vec::with_capacity(n + 1);
        for downs in 0..=n {
            let basis: Vec<usize> = (0..1usize << n).filter(|i| i.count_ones() as usize == downs).collect();
            for (p, &idx) in basis.iter().enumerate() {
                position[idx] = p;
            }
            let m = basis.len();
            let mut h = DMatrix::<f64>::zeros(m, m);
            for (p, &idx) in basis.iter().enumerate() {
                let mut diag = 0.0;
                for j in 0..n {
                    diag += fields[j] * sz_of(idx, j, n);
                }
                for j in 0..n - 1 {
                    let (a, b) = (sz_of(idx, j, n), sz_of(idx, j + 1, n));
                    diag += delta * a * b;
                    if a != b {
                        let flipped = idx ^ (1 << (n - 1 - j)) ^ (1 << (n - 2 - j));
                        h[(position[flipped], p)] += 0.5;
                    }
                }
                h[(p, p)] += diag;
            }
            let eig = SymmetricEigen::new(h);
            sectors.push(Sector { basis, energies: eig.eigenvalues, vectors: eig.eigenvectors });
        }
        Ok(Self { n, delta, fields: fields.to_vec(), sectors })
    }

    pub fn from_model(params: &ModelParams<f64>, realization: &DisorderRealization<f64>) -> Result<Self> {
        if realization.n() != params.n {
            return Err(Error::invalid("realization length differs from n"));
        }
        Self::new(params.n, params.delta, &realization.fields)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// All eigenvalues, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self.sectors.iter().flat_map(|s| s.energies.iter().copied()).collect();
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        e
    }

    /// `e^{−iHt}|ψ⟩`.
    pub fn evolve(&self, state: &DenseState, t: f64) -> Result<DenseState> {
        if state.n != self.n {
            return Err(Error::invalid("state and Hamiltonian sizes differ"));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); 1 << self.n];
        for s in &self.sectors {
            let m = s.basis.len();
            let psi: Vec<Complex64> = s.basis.iter().map(|&i| state.amplitudes[i]).collect();
            // c = Vᵀψ, c ← e^{−iEt} c, ψ' = V c
            let coeffs: Vec<Complex64> = (0..m)
                .map(|k| {
                    let c: Complex64 = (0..m).map(|p| psi[p] * s.vectors[(p, k)]).sum();
                    c * Complex64::from_polar(1.0, -s.energies[k] * t)
                })
                .collect();
            for (p, &idx) in s.basis.iter().enumerate() {
                out[idx] = (0..m).map(|k| coeffs[k] * s.vectors[(p, k)]).sum();
            }
        }
        Ok(DenseState { n: self.n, amplitudes: out })
    }

    /// `⟨ψ|H|ψ⟩`.
    pub fn energy(&self, state: &DenseState) -> f64 {
        let h = dense_hamiltonian(self.n, self.delta, &self.fields).expect("size checked at construction");
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..h.rows() {
            for (j, hij) in h.row(i).iter().enumerate() {
                acc += state.amplitudes[i].conj() * hij * state.amplitudes[j];
            }
        }
        acc.re
    }

    /// `2^{−n} tr(s^z_origin(t) s^z_{origin+r})` on the requested grid.
    pub fn correlation(&self, origin: usize, times: &[f64], offsets: &[isize]) -> CorrelationGrid<f64> {
        let n = self.n;
        let (valid, skipped) = split_offsets(origin, offsets, n);
        let mut grid = CorrelationGrid::new(origin, times.to_vec(), valid.clone(), skipped);
        // per sector: A_k = Vᵀ diag(z_k) V
        let projected: Vec<Vec<DMatrix<f64>>> = self
            .sectors
            .iter()
            .map(|s| {
                (0..n)
                    .map(|k| {
                        let z = DVector::from_iterator(s.basis.len(), s.basis.iter().map(|&i| sz_of(i, k, n)));
                        let scaled = DMatrix::from_fn(s.basis.len(), s.basis.len(), |p, q| z[p] * s.vectors[(p, q)]);
                        s.vectors.transpose() * scaled
                    })
                    .collect()
            })
            .collect();
        let norm = (0.5f64).powi(n as i32);
        for &t in times {
            let mut row = vec![0.0; valid.len()];
            for (s, ops) in self.sectors.iter().zip(&projected) {
                let m = s.basis.len();
                let phase = DMatrix::from_fn(m, m, |a, b| ((s.energies[a] - s.energies[b]) * t).cos());
                let weighted = phase.component_mul(&ops[origin]);
                for (slot, &r) in row.iter_mut().zip(&valid) {
                    let k = (origin as isize + r) as usize;
                    *slot += weighted.dot(&ops[k]);
                }
            }
            grid.push_row(row.into_iter().map(|v| v * norm).collect());
        }
        grid
    }
}

pub(crate) fn split_offsets(origin: usize, offsets: &[isize], n: usize) -> (Vec<isize>, Vec<isize>) {
    offsets.iter().partition(|&&r| {
        let k = origin as isize + r;
        k >= 0 && (k as usize) < n
    })
}

/// Full `2^n × 2^n` Hamiltonian matrix, assembled term by term.
pub fn dense_hamiltonian(n: usize, delta: f64, fields: &[f64]) -> Result<DenseMatrix<f64>> {
    if n > ED_MAX_SITES {
        return Err(Error::TooLarge { n, limit: ED_MAX_SITES });
    }
    if fields.len() != n {
        return Err(Error::invalid("need one field per site"));
    }
    let dim = 1usize << n;
    let mut h = DenseMatrix::zeros(dim, dim);
    for idx in 0..dim {
        for j in 0..n {
            h[(idx, idx)] += Complex64::new(fields[j] * sz_of(idx, j, n), 0.0);
        }
        for j in 0..n - 1 {
            let (a, b) = (sz_of(idx, j, n), sz_of(idx, j + 1, n));
            h[(idx, idx)] += Complex64::new(delta * a * b, 0.0);
            if a != b {
                let flipped = idx ^ (1 << (n - 1 - j)) ^ (1 << (n - 2 - j));
                h[(flipped, idx)] += Complex64::new(0.5, 0.0);
            }
        }
    }
    Ok(h)
}

pub fn ed_evolve(
    state: &DenseState,
    params: &ModelParams<f64>,
    realization: &DisorderRealization<f64>,
    t: f64,
) -> Result<DenseState> {
    ExactXxz::from_model(params, realization)?.evolve(state, t)
}

/// Exact `C(r, t)` with origin at site `⌊n/4⌋` (1-based).
pub fn ed_correlation(
    params: &ModelParams<f64>,
    realization: &DisorderRealization<f64>,
    times: &[f64],
    offsets: &[isize],
) -> Result<CorrelationGrid<f64>> {
    let ed = ExactXxz::from_model(params, realization)?;
    Ok(ed.correlation(correlation_origin(params.n), times, offsets))
}
