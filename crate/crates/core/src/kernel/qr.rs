//! Thin Householder QR, used for gauge moves where singular values are not needed.

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::DenseMatrix;
use super::svd::{householder, reflect};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `a = q · r` with `k = min(rows, cols)`: `q` is `rows × k` with orthonormal
/// columns and `r` is `k × cols` upper triangular.
#[derive(Clone, Debug)]
pub struct QrResult<T: Real> {
    pub q: DenseMatrix<T>,
    pub r: DenseMatrix<T>,
}

pub fn qr<T: Real>(a: &DenseMatrix<T>) -> Result<QrResult<T>> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Err(Error::invalid(format!("cannot decompose an empty {m}x{n} matrix")));
    }
    let k = m.min(n);
    let mut cols: Vec<Vec<Complex<T>>> = (0..n).map(|j| (0..m).map(|i| a[(i, j)]).collect()).collect();
    let mut reflectors = Vec::with_capacity(k);
    for j in 0..k {
        let v = householder(&cols[j][j..]);
        if let Some((v, beta)) = &v {
            for col in cols[j + 1..].iter_mut() {
                reflect(&mut col[j..], v);
            }
            cols[j][j] = *beta;
            for z in cols[j][j + 1..].iter_mut() {
                *z = Complex::zero();
            }
        }
        reflectors.push(v.map(|(v, _)| v));
    }
    let r = DenseMatrix::from_fn(k, n, |i, j| if i <= j { cols[j][i] } else { Complex::zero() });

    let mut q: Vec<Vec<Complex<T>>> = (0..k)
        .map(|j| {
            let mut e = vec![Complex::zero(); m];
            e[j] = Complex::new(T::one(), T::zero());
            e
        })
        .collect();
    for (j, v) in reflectors.iter().enumerate().rev() {
        if let Some(v) = v {
            for col in q.iter_mut() {
                reflect(&mut col[j..], v);
            }
        }
    }
    Ok(QrResult { q: DenseMatrix::from_fn(m, k, |i, j| q[j][i]), r })
}
