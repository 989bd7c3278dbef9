#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xxz_mbl::kernel::DenseMatrix;

pub type CMat = DMatrix<Complex64>;

pub fn to_na(m: &DenseMatrix<f64>) -> CMat {
    CMat::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

pub fn from_na(m: &CMat) -> DenseMatrix<f64> {
    DenseMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> DenseMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DenseMatrix::from_fn(rows, cols, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn random_state(dim: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v: Vec<Complex64> = (0..dim).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// `exp(−i H t)` for Hermitian `H` through nalgebra's eigensolver.
pub fn propagator(h: &CMat, t: f64) -> CMat {
    let eig = h.clone().symmetric_eigen();
    let phases = DVector::from_iterator(h.nrows(), eig.eigenvalues.iter().map(|&e| Complex64::from_polar(1.0, -e * t)));
    &eig.eigenvectors * CMat::from_diagonal(&phases) * eig.eigenvectors.adjoint()
}

/// `I_{2^left} ⊗ op ⊗ I_{2^right}` for an operator on consecutive sites
/// starting at `first` (site 0 is the most significant bit).
pub fn embed(op: &CMat, first: usize, n: usize) -> CMat {
    let k = (op.nrows() as f64).log2().round() as usize;
    let left = CMat::identity(1 << first, 1 << first);
    let right_dim = 1 << (n - first - k);
    let right = CMat::identity(right_dim, right_dim);
    left.kronecker(op).kronecker(&right)
}

pub fn pauli(k: usize) -> CMat {
    let (o, z, i) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0));
    match k {
        0 => CMat::from_row_slice(2, 2, &[o, z, z, o]),
        1 => CMat::from_row_slice(2, 2, &[z, o, o, z]),
        2 => CMat::from_row_slice(2, 2, &[z, -i, i, z]),
        3 => CMat::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => panic!("pauli index"),
    }
}

/// Pauli string from per-site indices (site 0 first).
pub fn pauli_string(indices: &[usize]) -> CMat {
    indices.iter().skip(1).fold(pauli(indices[0]), |acc, &k| acc.kronecker(&pauli(k)))
}

pub fn max_dev(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Coefficient of determination of a least-squares line through `(x, y)`.
pub fn r_squared(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    if syy == 0.0 {
        return 1.0;
    }
    sxy * sxy / (sxx * syy)
}
