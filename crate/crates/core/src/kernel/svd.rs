//! Golub-Kahan SVD: Householder bidiagonalization followed by implicit-shift
//! QR sweeps on the real bidiagonal, with rotations accumulated into the
//! left and right factors.

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Budget of QR sweeps per singular value.
const SWEEPS_PER_VALUE: usize = 75;

/// `a = left · diag(singular_values) · right_adj`, thin form with
/// `k = min(rows, cols)` singular values in descending order.
#[derive(Clone, Debug)]
pub struct SvdResult<T: Real> {
    pub left: DenseMatrix<T>,
    pub singular_values: Vec<T>,
    pub right_adj: DenseMatrix<T>,
}

impl<T: Real> SvdResult<T> {
    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }

    /// `left · diag(σ) · right_adj`.
    pub fn reconstruct(&self) -> DenseMatrix<T> {
        let k = self.rank();
        let scaled = DenseMatrix::from_fn(self.left.rows(), k, |i, j| {
            self.left[(i, j)] * self.singular_values[j]
        });
        scaled.matmul(&self.right_adj).expect("consistent SVD shapes")
    }

    /// Keeps the leading `keep` triplets.
    pub fn leading(&self, keep: usize) -> Self {
        let keep = keep.min(self.rank());
        let left = DenseMatrix::from_fn(self.left.rows(), keep, |i, j| self.left[(i, j)]);
        let right_adj = DenseMatrix::from_fn(keep, self.right_adj.cols(), |i, j| self.right_adj[(i, j)]);
        Self {
            left,
            singular_values: self.singular_values[..keep].to_vec(),
            right_adj,
        }
    }
}

pub fn svd<T: Real>(a: &DenseMatrix<T>) -> Result<SvdResult<T>> {
    let (rows, cols) = a.shape();
    if rows == 0 || cols == 0 {
        return Err(Error::invalid(format!("cannot decompose an empty {rows}x{cols} matrix")));
    }
    if a.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::invalid("SVD input contains non-finite entries"));
    }
    if rows >= cols {
        svd_tall(a)
    } else {
        // a† = U Σ V†  =>  a = V Σ U†
        let t = svd_tall(&a.adjoint())?;
        Ok(SvdResult {
            left: t.right_adj.adjoint(),
            singular_values: t.singular_values,
            right_adj: t.left.adjoint(),
        })
    }
}

/// Column-major complex buffer with `len`-long columns.
struct Columns<T: Real> {
    len: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> Columns<T> {
    fn identity(len: usize, count: usize) -> Self {
        let mut data = vec![Complex::zero(); len * count];
        for j in 0..count.min(len) {
            data[j * len + j] = Complex::new(T::one(), T::zero());
        }
        Self { len, data }
    }

    fn col(&self, j: usize) -> &[Complex<T>] {
        &self.data[j * self.len..(j + 1) * self.len]
    }

    fn col_mut(&mut self, j: usize) -> &mut [Complex<T>] {
        &mut self.data[j * self.len..(j + 1) * self.len]
    }

    /// `col_a ← c·col_a + s·col_b`, `col_b ← −s·col_a + c·col_b`.
    fn rotate(&mut self, a: usize, b: usize, c: T, s: T) {
        let len = self.len;
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * len);
        let (x_lo, x_hi) = (&mut head[lo * len..(lo + 1) * len], &mut tail[..len]);
        let (xa, xb) = if a < b { (x_lo, x_hi) } else { (x_hi, x_lo) };
        for (p, q) in xa.iter_mut().zip(xb.iter_mut()) {
            let (u, v) = (*p, *q);
            *p = u * c + v * s;
            *q = v * c - u * s;
        }
    }
}

/// Reflector `I − 2 w w†` (unit `w`, supported from `start`) sending `x` to
/// `beta · e_start`.
pub(super) fn householder<T: Real>(x: &[Complex<T>]) -> Option<(Vec<Complex<T>>, Complex<T>)> {
    let norm = x.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    if norm.is_zero() {
        return None;
    }
    let alpha = x[0];
    let a = alpha.norm();
    let phase = if a.is_zero() { Complex::new(T::one(), T::zero()) } else { alpha / a };
    let beta = -phase * norm;
    let mut w = x.to_vec();
    w[0] = alpha - beta;
    let wn = w.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    if wn.is_zero() {
        return None;
    }
    for z in w.iter_mut() {
        *z = *z / wn;
    }
    Some((w, beta))
}

/// `col[start..] −= 2 w (w† col[start..])`.
#[inline]
pub(super) fn reflect<T: Real>(col: &mut [Complex<T>], w: &[Complex<T>]) {
    let dot: Complex<T> = w.iter().zip(col.iter()).map(|(a, b)| a.conj() * b).sum();
    if dot.is_zero() {
        return;
    }
    let f = dot * T::lit(2.0);
    for (c, a) in col.iter_mut().zip(w.iter()) {
        *c -= *a * f;
    }
}

/// `(c, s, r)` with `c·y + s·z = r`, `−s·y + c·z = 0`.
#[inline]
fn givens<T: Real>(y: T, z: T) -> (T, T, T) {
    if z.is_zero() {
        return (T::one(), T::zero(), y);
    }
    let r = y.hypot(z);
    (y / r, z / r, r)
}

/// SVD for `rows >= cols`.
fn svd_tall<T: Real>(a: &DenseMatrix<T>) -> Result<SvdResult<T>> {
    let (m, n) = a.shape();
    let mut w = Columns { len: m, data: (0..n).flat_map(|j| (0..m).map(move |i| (i, j))).map(|(i, j)| a[(i, j)]).collect() };

    // bidiagonalize: a = U_B · B · V_B†
    let mut left_reflectors: Vec<Option<Vec<Complex<T>>>> = Vec::with_capacity(n);
    let mut right_reflectors: Vec<Option<Vec<Complex<T>>>> = Vec::with_capacity(n);
    let mut dc = vec![Complex::<T>::zero(); n];
    let mut ec = vec![Complex::<T>::zero(); n.saturating_sub(1)];
    let mut row_acc = vec![Complex::<T>::zero(); m];
    for k in 0..n {
        match householder(&w.col(k)[k..]) {
            Some((v, beta)) => {
                for j in k..n {
                    reflect(&mut w.col_mut(j)[k..], &v);
                }
                dc[k] = beta;
                left_reflectors.push(Some(v));
            }
            None => {
                dc[k] = Complex::zero();
                left_reflectors.push(None);
            }
        }
        if k + 1 >= n {
            continue;
        }
        // row k right of the diagonal, conjugated into a column
        let x: Vec<Complex<T>> = ((k + 1)..n).map(|j| w.col(j)[k].conj()).collect();
        match householder(&x) {
            Some((v, beta)) => {
                // rows k..m: r ← r − 2 (r·v) v†
                for s in row_acc[k..].iter_mut() {
                    *s = Complex::zero();
                }
                for (jj, j) in ((k + 1)..n).enumerate() {
                    let vj = v[jj];
                    let col = w.col(j);
                    for i in k..m {
                        row_acc[i] += col[i] * vj;
                    }
                }
                for (jj, j) in ((k + 1)..n).enumerate() {
                    let f = v[jj].conj() * T::lit(2.0);
                    let col = w.col_mut(j);
                    for i in k..m {
                        col[i] -= row_acc[i] * f;
                    }
                }
                ec[k] = beta.conj();
                right_reflectors.push(Some(v));
            }
            None => {
                ec[k] = Complex::zero();
                right_reflectors.push(None);
            }
        }
    }

    let mut u = Columns::identity(m, n);
    for k in (0..n).rev() {
        if let Some(v) = &left_reflectors[k] {
            for j in k..n {
                reflect(&mut u.col_mut(j)[k..], v);
            }
        }
    }
    let mut vmat = Columns::identity(n, n);
    for k in (0..n.saturating_sub(1)).rev() {
        if let Some(v) = &right_reflectors[k] {
            for j in (k + 1)..n {
                reflect(&mut vmat.col_mut(j)[(k + 1)..], v);
            }
        }
    }

    // make the bidiagonal real by absorbing phases into U and V
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n.saturating_sub(1)];
    for k in 0..n {
        let mag = dc[k].norm();
        if !mag.is_zero() {
            let ph = dc[k] / mag;
            for z in u.col_mut(k) {
                *z = *z * ph;
            }
            if k + 1 < n {
                ec[k] = ec[k] * ph.conj();
            }
        }
        d[k] = mag;
        if k + 1 < n {
            let mag = ec[k].norm();
            if !mag.is_zero() {
                let ph = ec[k] / mag;
                for z in vmat.col_mut(k + 1) {
                    *z = *z * ph.conj();
                }
                dc[k + 1] = dc[k + 1] * ph.conj();
            }
            e[k] = mag;
        }
    }

    bidiagonal_qr(&mut d, &mut e, &mut u, &mut vmat)?;

    for (k, x) in d.iter_mut().enumerate() {
        if *x < T::zero() {
            *x = -*x;
            for z in vmat.col_mut(k) {
                *z = -*z;
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal values keep their position
    order.sort_by(|&i, &j| d[j].partial_cmp(&d[i]).expect("finite singular values"));

    let mut left = DenseMatrix::zeros(m, n);
    let mut right_adj = DenseMatrix::zeros(n, n);
    let mut singular_values = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        singular_values.push(d[j]);
        for (i, z) in u.col(j).iter().enumerate() {
            left[(i, k)] = *z;
        }
        for (i, z) in vmat.col(j).iter().enumerate() {
            right_adj[(k, i)] = z.conj();
        }
    }
    Ok(SvdResult { left, singular_values, right_adj })
}

/// Diagonalizes the upper bidiagonal `(d, e)` in place; `u` and `v` receive
/// the left and right rotations.
fn bidiagonal_qr<T: Real>(d: &mut [T], e: &mut [T], u: &mut Columns<T>, v: &mut Columns<T>) -> Result<()> {
    let n = d.len();
    if n < 2 {
        return Ok(());
    }
    let eps = T::epsilon();
    let anorm = d.iter().chain(e.iter()).fold(T::zero(), |acc, x| acc.max(x.abs()));
    if anorm.is_zero() {
        return Ok(());
    }
    let tiny = anorm * eps * eps;
    let budget = SWEEPS_PER_VALUE * n;
    let mut iterations = 0;
    let mut hi = n - 1;
    while hi > 0 {
        for i in 0..hi {
            if e[i].abs() <= eps * (d[i].abs() + d[i + 1].abs()) || e[i].abs() <= tiny {
                e[i] = T::zero();
            }
        }
        if e[hi - 1].is_zero() {
            hi -= 1;
            continue;
        }
        let mut lo = hi - 1;
        while lo > 0 && !e[lo - 1].is_zero() {
            lo -= 1;
        }
        iterations += 1;
        if iterations > budget {
            return Err(Error::SvdNoConvergence { sweeps: budget });
        }
        let dtol = eps * anorm;
        if let Some(i) = (lo..hi).find(|&i| d[i].abs() <= dtol) {
            d[i] = T::zero();
            chase_row(d, e, u, i, hi);
            continue;
        }
        if d[hi].abs() <= dtol {
            d[hi] = T::zero();
            chase_column(d, e, v, lo, hi);
            continue;
        }
        qr_step(d, e, u, v, lo, hi);
    }
    Ok(())
}

/// `d[i] = 0`: rotates row `i` against the rows below until `e[i]` is gone.
fn chase_row<T: Real>(d: &mut [T], e: &mut [T], u: &mut Columns<T>, i: usize, hi: usize) {
    let mut f = e[i];
    e[i] = T::zero();
    for j in (i + 1)..=hi {
        let (c, s, r) = givens(d[j], f);
        d[j] = r;
        u.rotate(j, i, c, s);
        if j < hi {
            f = -s * e[j];
            e[j] = c * e[j];
        }
    }
}

/// `d[hi] = 0`: rotates column `hi` against the columns to its left until
/// `e[hi - 1]` is gone.
fn chase_column<T: Real>(d: &mut [T], e: &mut [T], v: &mut Columns<T>, lo: usize, hi: usize) {
    let mut f = e[hi - 1];
    e[hi - 1] = T::zero();
    for j in (lo..hi).rev() {
        let (c, s, r) = givens(d[j], f);
        d[j] = r;
        v.rotate(j, hi, c, s);
        if j > lo {
            f = -s * e[j - 1];
            e[j - 1] = c * e[j - 1];
        }
    }
}

/// One implicit Wilkinson-shifted sweep over the unreduced block `lo..=hi`.
fn qr_step<T: Real>(d: &mut [T], e: &mut [T], u: &mut Columns<T>, v: &mut Columns<T>, lo: usize, hi: usize) {
    let two = T::lit(2.0);
    let t11 = d[hi - 1] * d[hi - 1] + if hi - 1 > lo { e[hi - 2] * e[hi - 2] } else { T::zero() };
    let t12 = d[hi - 1] * e[hi - 1];
    let t22 = d[hi] * d[hi] + e[hi - 1] * e[hi - 1];
    let half = (t11 - t22) / two;
    let root = half.hypot(t12);
    let mu = if half >= T::zero() { t22 - t12 * t12 / (half + root) } else { t22 + t12 * t12 / (root - half) };

    let mut y = d[lo] * d[lo] - mu;
    let mut z = d[lo] * e[lo];
    for k in lo..hi {
        let (c, s, r) = givens(y, z);
        if k > lo {
            e[k - 1] = r;
        }
        let (dk, ek) = (d[k], e[k]);
        d[k] = c * dk + s * ek;
        e[k] = c * ek - s * dk;
        let bulge = s * d[k + 1];
        d[k + 1] = c * d[k + 1];
        v.rotate(k, k + 1, c, s);

        let (c, s, r) = givens(d[k], bulge);
        d[k] = r;
        let (ek, dk1) = (e[k], d[k + 1]);
        e[k] = c * ek + s * dk1;
        d[k + 1] = c * dk1 - s * ek;
        u.rotate(k, k + 1, c, s);
        if k + 1 < hi {
            y = e[k];
            z = s * e[k + 1];
            e[k + 1] = c * e[k + 1];
        }
    }
}
