//! Cyclic Jacobi eigensolver for small Hermitian matrices (bond Hamiltonians
//! are 4×4). Not intended for large inputs.

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

/// `a = vectors · diag(values) · vectors†`, values ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T: Real> {
    pub values: Vec<T>,
    pub vectors: DenseMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// `vectors · diag(f(λ)) · vectors†`.
    pub fn map_spectrum(&self, f: impl Fn(T) -> Complex<T>) -> DenseMatrix<T> {
        let n = self.values.len();
        let fv: Vec<Complex<T>> = self.values.iter().map(|&x| f(x)).collect();
        DenseMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| self.vectors[(i, k)] * fv[k] * self.vectors[(j, k)].conj()).sum()
        })
    }
}

pub fn hermitian_eigen<T: Real>(a: &DenseMatrix<T>) -> Result<HermitianEigen<T>> {
    let n = a.rows();
    if n != a.cols() {
        return Err(Error::invalid(format!("eigensolver needs a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    let scale = a.max_abs().max(T::min_positive_value());
    if !a.is_hermitian(scale * T::lit(1e3) * T::epsilon()) {
        return Err(Error::invalid("eigensolver input is not Hermitian"));
    }
    let mut m = a.clone();
    let mut vecs = DenseMatrix::identity(n);
    let tiny = T::epsilon() * T::epsilon() * scale * scale;

    let mut converged = n <= 1;
    for _ in 0..MAX_SWEEPS {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum();
        if off <= tiny {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let g = apq.norm();
                if g.is_zero() {
                    continue;
                }
                // make a_pq real by rephasing column/row q
                let phase = apq / g;
                for i in 0..n {
                    m[(i, q)] = m[(i, q)] * phase.conj();
                    vecs[(i, q)] = vecs[(i, q)] * phase.conj();
                }
                for j in 0..n {
                    m[(q, j)] = m[(q, j)] * phase;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let theta = (aqq - app) / (g + g);
                let t = if theta.is_zero() {
                    T::one()
                } else {
                    theta.signum() / (theta.abs() + (T::one() + theta * theta).sqrt())
                };
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = t * cs;
                // columns: A ← A R
                for i in 0..n {
                    let (xp, xq) = (m[(i, p)], m[(i, q)]);
                    m[(i, p)] = xp * cs - xq * sn;
                    m[(i, q)] = xp * sn + xq * cs;
                    let (vp, vq) = (vecs[(i, p)], vecs[(i, q)]);
                    vecs[(i, p)] = vp * cs - vq * sn;
                    vecs[(i, q)] = vp * sn + vq * cs;
                }
                // rows: A ← Rᵀ A
                for j in 0..n {
                    let (xp, xq) = (m[(p, j)], m[(q, j)]);
                    m[(p, j)] = xp * cs - xq * sn;
                    m[(q, j)] = xp * sn + xq * cs;
                }
                m[(p, q)] = Complex::zero();
                m[(q, p)] = Complex::zero();
                m[(p, p)] = Complex::new(m[(p, p)].re, T::zero());
                m[(q, q)] = Complex::new(m[(q, q)].re, T::zero());
            }
        }
    }
    if !converged {
        return Err(Error::EigenNoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = DenseMatrix::from_fn(n, n, |i, k| vecs[(i, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type C = Complex<f64>;

    fn random_hermitian(n: usize, seed: u64) -> DenseMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = DenseMatrix::from_fn(n, n, |_, _| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        a.add(&a.adjoint()).unwrap()
    }

    #[test]
    fn reconstructs_random_hermitian() {
        for (n, seed) in [(1, 0), (2, 1), (4, 2), (7, 3), (16, 4)] {
            let a = random_hermitian(n, seed);
            let e = hermitian_eigen(&a).unwrap();
            assert!(e.vectors.unitarity_defect() < 1e-12);
            let back = e.map_spectrum(|x| C::new(x, 0.0));
            assert!(back.sub(&a).unwrap().max_abs() < 1e-12);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn degenerate_spectrum() {
        // singlet-triplet structure of s·s
        let q = 0.25;
        let mut a = DenseMatrix::<f64>::zeros(4, 4);
        a[(0, 0)] = C::new(q, 0.0);
        a[(3, 3)] = C::new(q, 0.0);
        a[(1, 1)] = C::new(-q, 0.0);
        a[(2, 2)] = C::new(-q, 0.0);
        a[(1, 2)] = C::new(0.5, 0.0);
        a[(2, 1)] = C::new(0.5, 0.0);
        let e = hermitian_eigen(&a).unwrap();
        let expect = [-0.75, 0.25, 0.25, 0.25];
        for (x, y) in e.values.iter().zip(expect) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut a = DenseMatrix::<f64>::zeros(2, 2);
        a[(0, 1)] = C::new(1.0, 0.0);
        assert!(hermitian_eigen(&a).is_err());
    }
}
