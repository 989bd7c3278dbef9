use num_complex::Complex;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::entropy::SchmidtSpectrum;
use super::ledger::TruncationLedger;
use crate::error::{Error, Result};
use crate::kernel::{qr, svd, truncate, DenseMatrix, TruncationPolicy};
use crate::scalar::{cis, Real};

/// Physical index of each Pauli matrix in the `d = 4` super-ket basis.
pub const PAULI_I: usize = 0;
pub const PAULI_X: usize = 1;
pub const PAULI_Y: usize = 2;
pub const PAULI_Z: usize = 3;

/// Densest chain (in log₂ of the Hilbert-space dimension) `to_dense` accepts.
const DENSE_LIMIT_BITS: u32 = 26;

/// Rank-3 tensor indexed `(left bond, physical, right bond)`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteTensor<T: Real> {
    left: usize,
    phys: usize,
    right: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> SiteTensor<T> {
    pub fn new(left: usize, phys: usize, right: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != left * phys * right {
            return Err(Error::invalid(format!(
                "{} entries cannot fill a ({left}, {phys}, {right}) tensor",
                data.len()
            )));
        }
        Ok(Self { left, phys, right, data })
    }

    fn product(local: &[Complex<T>]) -> Self {
        Self { left: 1, phys: local.len(), right: 1, data: local.to_vec() }
    }

    pub fn left_dim(&self) -> usize {
        self.left
    }

    pub fn phys_dim(&self) -> usize {
        self.phys
    }

    pub fn right_dim(&self) -> usize {
        self.right
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    #[inline]
    pub fn get(&self, l: usize, s: usize, r: usize) -> Complex<T> {
        self.data[(l * self.phys + s) * self.right + r]
    }

    /// `(left·phys) × right` view.
    fn as_left_matrix(&self) -> DenseMatrix<T> {
        DenseMatrix::from_vec(self.left * self.phys, self.right, self.data.clone()).expect("consistent tensor")
    }

    /// `left × (phys·right)` view.
    fn as_right_matrix(&self) -> DenseMatrix<T> {
        DenseMatrix::from_vec(self.left, self.phys * self.right, self.data.clone()).expect("consistent tensor")
    }

    fn from_matrix(left: usize, phys: usize, right: usize, m: DenseMatrix<T>) -> Self {
        debug_assert_eq!(m.rows() * m.cols(), left * phys * right);
        Self { left, phys, right, data: m.into_vec() }
    }

    fn norm_sqr(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// What one gate application did to its bond.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateOutcome<T> {
    pub discarded_weight: T,
    pub bond_dim: usize,
    pub capped: bool,
}

/// Open-boundary matrix-product chain in mixed-canonical form.
///
/// The represented vector is `exp(log_scale) · |chain⟩`, where the tensors
/// themselves carry unit norm. Sites left of `center` are left-canonical,
/// sites right of it right-canonical.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixProductChain<T: Real> {
    local_dim: usize,
    sites: Vec<SiteTensor<T>>,
    center: usize,
    log_scale: T,
}

impl<T: Real> MatrixProductChain<T> {
    /// Normalized product of the given local vectors.
    pub fn product_state(locals: &[Vec<Complex<T>>]) -> Result<Self> {
        let n = locals.len();
        if n < 2 {
            return Err(Error::invalid(format!("a chain needs at least 2 sites, got {n}")));
        }
        let d = locals[0].len();
        if d < 2 || locals.iter().any(|v| v.len() != d) {
            return Err(Error::invalid("all sites need the same local dimension ≥ 2"));
        }
        let mut log_scale = T::zero();
        let mut sites = Vec::with_capacity(n);
        for v in locals {
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
            if !(norm > T::zero()) || !norm.is_finite() {
                return Err(Error::invalid("local vectors must be finite and non-zero"));
            }
            log_scale += norm.ln();
            let unit: Vec<Complex<T>> = v.iter().map(|&z| z / norm).collect();
            sites.push(SiteTensor::product(&unit));
        }
        Ok(Self { local_dim: d, sites, center: 0, log_scale })
    }

    /// Product of independent qubits, each uniform on the Bloch sphere.
    pub fn random_product_state(n: usize, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("a chain needs at least 2 sites, got {n}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let locals: Vec<Vec<Complex<T>>> = (0..n)
            .map(|_| {
                let cos_theta: f64 = rng.gen_range(-1.0..=1.0);
                let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let half = cos_theta.clamp(-1.0, 1.0).acos() / 2.0;
                vec![
                    Complex::new(T::lit(half.cos()), T::zero()),
                    cis(T::lit(phi)) * T::lit(half.sin()),
                ]
            })
            .collect();
        Self::product_state(&locals)
    }

    /// Super-ket of `s^z` at `site` in the orthonormal Pauli basis, where the
    /// inner product is `2^{-n} tr(A†B)`. The tensors hold the unit vector
    /// `|I…Z…I⟩⟩`; `log_scale = ln(1/2)` restores `s^z = σ^z / 2`.
    pub fn operator_superket_sz(n: usize, site: usize) -> Result<Self> {
        if site >= n {
            return Err(Error::OutOfRange { what: "site", index: site, len: n });
        }
        let mut chain = Self::pauli_string(n, &[(site, PAULI_Z)])?;
        chain.log_scale = T::lit(0.5).ln();
        Ok(chain)
    }

    /// Unit super-ket of a Pauli string; unlisted sites carry the identity.
    pub fn pauli_string(n: usize, paulis: &[(usize, usize)]) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("a chain needs at least 2 sites, got {n}")));
        }
        let mut locals = vec![basis_vector::<T>(4, PAULI_I); n];
        for &(site, p) in paulis {
            if site >= n {
                return Err(Error::OutOfRange { what: "site", index: site, len: n });
            }
            if p >= 4 {
                return Err(Error::OutOfRange { what: "Pauli index", index: p, len: 4 });
            }
            locals[site] = basis_vector(4, p);
        }
        Self::product_state(&locals)
    }

    /// Builds a canonical chain from a dense vector whose first site is the
    /// most significant digit.
    pub fn from_dense(local_dim: usize, n: usize, amplitudes: &[Complex<T>]) -> Result<Self> {
        if n < 2 || local_dim < 2 {
            return Err(Error::invalid("need n ≥ 2 and local dimension ≥ 2"));
        }
        let expected = local_dim
            .checked_pow(n as u32)
            .ok_or_else(|| Error::invalid("dense dimension overflows"))?;
        if amplitudes.len() != expected {
            return Err(Error::invalid(format!("expected {expected} amplitudes, got {}", amplitudes.len())));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if !(norm > T::zero()) {
            return Err(Error::invalid("cannot build a chain from the zero vector"));
        }
        let mut sites = Vec::with_capacity(n);
        let mut rest = DenseMatrix::from_vec(1, expected, amplitudes.iter().map(|&z| z / norm).collect())?;
        let mut left = 1;
        for _ in 0..n - 1 {
            let cols = rest.cols() / local_dim;
            let m = DenseMatrix::from_vec(left * local_dim, cols, rest.into_vec())?;
            let dec = truncate(&svd(&m)?, &TruncationPolicy::exact())?.svd;
            let k = dec.rank();
            sites.push(SiteTensor::from_matrix(left, local_dim, k, dec.left.clone()));
            rest = scale_rows(&dec.right_adj, &dec.singular_values);
            left = k;
        }
        sites.push(SiteTensor::from_matrix(left, local_dim, 1, rest));
        let mut chain = Self { local_dim, sites, center: n - 1, log_scale: norm.ln() };
        chain.normalize_center();
        Ok(chain)
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn center(&self) -> usize {
        self.center
    }

    pub fn log_scale(&self) -> T {
        self.log_scale
    }

    /// `exp(log_scale)`: physical norm of the represented vector.
    pub fn scale(&self) -> T {
        self.log_scale.exp()
    }

    pub fn sites(&self) -> &[SiteTensor<T>] {
        &self.sites
    }

    pub fn site(&self, i: usize) -> &SiteTensor<T> {
        &self.sites[i]
    }

    /// `n − 1` bond dimensions; `bond_dims()[b]` links sites `b` and `b + 1`.
    pub fn bond_dims(&self) -> Vec<usize> {
        self.sites[..self.sites.len() - 1].iter().map(|s| s.right).collect()
    }

    pub fn max_bond_dim(&self) -> usize {
        self.bond_dims().into_iter().max().unwrap_or(1)
    }

    /// Reassembles a chain from raw parts (used by checkpoint loading).
    pub(crate) fn from_parts(local_dim: usize, sites: Vec<SiteTensor<T>>, center: usize, log_scale: T) -> Result<Self> {
        let n = sites.len();
        if n < 2 {
            return Err(Error::invalid("a chain needs at least 2 sites"));
        }
        if center >= n {
            return Err(Error::OutOfRange { what: "center", index: center, len: n });
        }
        if sites[0].left != 1 || sites[n - 1].right != 1 {
            return Err(Error::invalid("boundary bonds must have dimension 1"));
        }
        for (i, s) in sites.iter().enumerate() {
            if s.phys != local_dim {
                return Err(Error::invalid(format!("site {i} has physical dimension {}", s.phys)));
            }
            if i + 1 < n && s.right != sites[i + 1].left {
                return Err(Error::invalid(format!("bond {i} dimensions disagree")));
            }
        }
        Ok(Self { local_dim, sites, center, log_scale })
    }

    /// Brings the chain into mixed-canonical form with the center at site 0
    /// and unit tensor norm, regardless of the current gauge.
    pub fn canonicalize(&mut self) -> Result<()> {
        let n = self.len();
        for i in (1..n).rev() {
            self.split_left(i)?;
        }
        self.center = 0;
        self.normalize_center();
        Ok(())
    }

    /// Moves the orthogonality center to `target`.
    pub fn move_center_to(&mut self, target: usize) -> Result<()> {
        if target >= self.len() {
            return Err(Error::OutOfRange { what: "site", index: target, len: self.len() });
        }
        while self.center < target {
            self.shift_right(self.center)?;
            self.center += 1;
        }
        while self.center > target {
            self.shift_left(self.center)?;
            self.center -= 1;
        }
        Ok(())
    }

    /// Makes site `i` left-canonical, pushing the remainder into site `i + 1`.
    fn shift_right(&mut self, i: usize) -> Result<()> {
        let site = &self.sites[i];
        let (l, d) = (site.left, site.phys);
        let f = qr(&site.as_left_matrix())?;
        let k = f.q.cols();
        self.sites[i] = SiteTensor::from_matrix(l, d, k, f.q);
        let next = &self.sites[i + 1];
        let merged = f.r.matmul(&next.as_right_matrix())?;
        self.sites[i + 1] = SiteTensor::from_matrix(k, next.phys, next.right, merged);
        Ok(())
    }

    /// Makes site `i` right-canonical, pushing the remainder into site `i − 1`.
    fn shift_left(&mut self, i: usize) -> Result<()> {
        let site = &self.sites[i];
        let (d, r) = (site.phys, site.right);
        // m = r'† q'† from the QR of m†
        let f = qr(&site.as_right_matrix().adjoint())?;
        let k = f.q.cols();
        self.sites[i] = SiteTensor::from_matrix(k, d, r, f.q.adjoint());
        let prev = &self.sites[i - 1];
        let merged = prev.as_left_matrix().matmul(&f.r.adjoint())?;
        self.sites[i - 1] = SiteTensor::from_matrix(prev.left, prev.phys, k, merged);
        Ok(())
    }

    /// Like [`shift_right`](Self::shift_right) but through an SVD, dropping
    /// zero singular values; returns the singular values of the split.
    fn split_right(&mut self, i: usize) -> Result<Vec<T>> {
        let site = &self.sites[i];
        let (l, d) = (site.left, site.phys);
        let dec = truncate(&svd(&site.as_left_matrix())?, &TruncationPolicy::exact())?.svd;
        let k = dec.rank();
        let carry = scale_rows(&dec.right_adj, &dec.singular_values);
        self.sites[i] = SiteTensor::from_matrix(l, d, k, dec.left);
        let next = &self.sites[i + 1];
        let merged = carry.matmul(&next.as_right_matrix())?;
        self.sites[i + 1] = SiteTensor::from_matrix(k, next.phys, next.right, merged);
        Ok(dec.singular_values)
    }

    /// SVD counterpart of [`shift_left`](Self::shift_left), dropping zero
    /// singular values.
    fn split_left(&mut self, i: usize) -> Result<()> {
        let site = &self.sites[i];
        let (d, r) = (site.phys, site.right);
        let dec = truncate(&svd(&site.as_right_matrix())?, &TruncationPolicy::exact())?.svd;
        let k = dec.rank();
        let carry = scale_cols(&dec.left, &dec.singular_values);
        self.sites[i] = SiteTensor::from_matrix(k, d, r, dec.right_adj);
        let prev = &self.sites[i - 1];
        let merged = prev.as_left_matrix().matmul(&carry)?;
        self.sites[i - 1] = SiteTensor::from_matrix(prev.left, prev.phys, k, merged);
        Ok(())
    }

    /// Rescales the center tensor to unit norm, folding the factor into
    /// `log_scale`.
    pub fn normalize_center(&mut self) {
        let norm = self.sites[self.center].norm_sqr().sqrt();
        if norm > T::zero() && norm.is_finite() {
            for z in &mut self.sites[self.center].data {
                *z = *z / norm;
            }
            self.log_scale += norm.ln();
        }
    }

    /// Contracts a `d² × d²` gate into sites `bond`, `bond + 1`, splits the
    /// result by SVD and truncates it under `policy`. The chain stays
    /// normalized and `log_scale` absorbs the lost norm. The discarded weight
    /// is appended to `ledger`.
    ///
    /// The gate acts on the combined index `s_bond · d + s_{bond+1}`.
    pub fn apply_two_site_gate(
        &mut self,
        gate: &DenseMatrix<T>,
        bond: usize,
        policy: &TruncationPolicy<T>,
        ledger: &mut TruncationLedger<T>,
    ) -> Result<GateOutcome<T>> {
        let n = self.len();
        if bond + 1 >= n {
            return Err(Error::OutOfRange { what: "bond", index: bond, len: n - 1 });
        }
        let d = self.local_dim;
        if gate.shape() != (d * d, d * d) {
            return Err(Error::invalid(format!(
                "gate is {}x{}, chain needs {}x{}",
                gate.rows(),
                gate.cols(),
                d * d,
                d * d
            )));
        }
        let sweep_right = self.center <= bond;
        self.move_center_to(if sweep_right { bond } else { bond + 1 })?;

        let (a, b) = (&self.sites[bond], &self.sites[bond + 1]);
        let (dl, dr) = (a.left, b.right);
        // rows (l, s1), cols (s2, r)
        let theta = a.as_left_matrix().matmul(&b.as_right_matrix())?;
        let cols = d * dr;
        let mut out = DenseMatrix::zeros(dl * d, cols);
        let mut local = vec![Complex::<T>::zero(); d * d];
        for l in 0..dl {
            for r in 0..dr {
                for s1 in 0..d {
                    for s2 in 0..d {
                        local[s1 * d + s2] = theta[(l * d + s1, s2 * dr + r)];
                    }
                }
                for s1 in 0..d {
                    for s2 in 0..d {
                        let row = gate.row(s1 * d + s2);
                        let v: Complex<T> = row.iter().zip(&local).map(|(&g, &x)| g * x).sum();
                        out[(l * d + s1, s2 * dr + r)] = v;
                    }
                }
            }
        }

        let mut dec = svd(&out)?;
        let norm = dec.singular_values.iter().map(|&s| s * s).sum::<T>().sqrt();
        if !(norm > T::zero()) {
            return Err(Error::invalid(format!("gate on bond {bond} annihilated the chain")));
        }
        for s in &mut dec.singular_values {
            *s /= norm;
        }
        let cut = truncate(&dec, policy)?;
        let mut kept = cut.svd;
        let kept_weight: T = kept.singular_values.iter().map(|&s| s * s).sum();
        let renorm = kept_weight.sqrt();
        for s in &mut kept.singular_values {
            *s /= renorm;
        }
        self.log_scale += norm.ln() + renorm.ln();

        let k = kept.rank();
        if sweep_right {
            let right = scale_rows(&kept.right_adj, &kept.singular_values);
            self.sites[bond] = SiteTensor::from_matrix(dl, d, k, kept.left);
            self.sites[bond + 1] = SiteTensor::from_matrix(k, d, dr, right);
            self.center = bond + 1;
        } else {
            let left = scale_cols(&kept.left, &kept.singular_values);
            self.sites[bond] = SiteTensor::from_matrix(dl, d, k, left);
            self.sites[bond + 1] = SiteTensor::from_matrix(k, d, dr, kept.right_adj);
            self.center = bond;
        }
        ledger.record(bond, cut.discarded_weight, cut.capped);
        Ok(GateOutcome { discarded_weight: cut.discarded_weight, bond_dim: k, capped: cut.capped })
    }

    /// Schmidt spectrum for the cut separating the first `cut` sites.
    pub fn schmidt_spectrum(&self, cut: usize) -> Result<SchmidtSpectrum<T>> {
        let n = self.len();
        if cut == 0 || cut >= n {
            return Err(Error::OutOfRange { what: "cut", index: cut, len: n });
        }
        let mut work = self.clone();
        work.move_center_to(cut - 1)?;
        let dec = svd(&work.sites[cut - 1].as_left_matrix())?;
        SchmidtSpectrum::from_singular_values(cut, dec.singular_values)
    }

    /// Spectra for every cut `1..n`, from a single sweep.
    pub fn schmidt_spectra(&self) -> Result<Vec<SchmidtSpectrum<T>>> {
        let mut work = self.clone();
        work.move_center_to(0)?;
        let n = self.len();
        let mut out = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            let values = work.split_right(i)?;
            work.center = i + 1;
            out.push(SchmidtSpectrum::from_singular_values(i + 1, values)?);
        }
        Ok(out)
    }

    /// `Σ_conf conj(self) · other` over the unit-norm tensors (scales not applied).
    pub fn overlap(&self, other: &Self) -> Result<Complex<T>> {
        if self.len() != other.len() || self.local_dim != other.local_dim {
            return Err(Error::invalid("overlap needs chains of equal length and local dimension"));
        }
        // env[a][b]: a on self (conjugated), b on other
        let mut env = DenseMatrix::<T>::identity(1);
        for (x, y) in self.sites.iter().zip(&other.sites) {
            let mut next = DenseMatrix::zeros(x.right, y.right);
            for s in 0..self.local_dim {
                // env' += X_sᴴ env Y_s
                let xs = DenseMatrix::from_fn(x.left, x.right, |l, r| x.get(l, s, r));
                let ys = DenseMatrix::from_fn(y.left, y.right, |l, r| y.get(l, s, r));
                let term = xs.adjoint().matmul(&env)?.matmul(&ys)?;
                next = next.add(&term)?;
            }
            env = next;
        }
        Ok(env[(0, 0)])
    }

    /// `⟨chain|chain⟩` of the stored tensors; 1 for a normalized chain.
    pub fn norm_sqr(&self) -> T {
        self.overlap(self).map(|z| z.re).unwrap_or_else(|_| T::nan())
    }

    /// Stored tensors contracted to a dense vector (scale not applied).
    pub fn to_dense(&self) -> Result<Vec<Complex<T>>> {
        let bits = (self.local_dim as f64).log2() * self.len() as f64;
        if bits > DENSE_LIMIT_BITS as f64 {
            return Err(Error::TooLarge { n: self.len(), limit: DENSE_LIMIT_BITS as usize });
        }
        // rows: configurations so far, cols: current right bond
        let first = &self.sites[0];
        let mut acc = first.as_left_matrix();
        for site in &self.sites[1..] {
            let merged = acc.matmul(&site.as_right_matrix())?;
            let rows = merged.rows() * site.phys;
            acc = DenseMatrix::from_vec(rows, site.right, merged.into_vec())?;
        }
        Ok(acc.into_vec())
    }

    /// Coefficient of every single-site basis string `|e…e x_k e…e⟩` where
    /// the background index is `background` and `x` sits at site `k`;
    /// returns one coefficient per site (scale not applied).
    pub fn single_insertion_coefficients(&self, background: usize, inserted: usize) -> Result<Vec<Complex<T>>> {
        let d = self.local_dim;
        if background >= d || inserted >= d {
            return Err(Error::OutOfRange { what: "physical index", index: background.max(inserted), len: d });
        }
        let n = self.len();
        let slice = |site: &SiteTensor<T>, s: usize| DenseMatrix::from_fn(site.left, site.right, |l, r| site.get(l, s, r));
        // left[k]: product of background slices over sites < k (1 × D_k)
        let mut left = Vec::with_capacity(n);
        let mut acc = DenseMatrix::<T>::identity(1);
        for site in &self.sites {
            left.push(acc.clone());
            acc = acc.matmul(&slice(site, background))?;
        }
        let mut right = vec![DenseMatrix::<T>::identity(1); n];
        let mut acc = DenseMatrix::<T>::identity(1);
        for k in (0..n).rev() {
            right[k] = acc.clone();
            acc = slice(&self.sites[k], background).matmul(&acc)?;
        }
        (0..n)
            .map(|k| {
                let v = left[k].matmul(&slice(&self.sites[k], inserted))?.matmul(&right[k])?;
                Ok(v[(0, 0)])
            })
            .collect()
    }

    /// `⟨O_site⟩` for a `d × d` single-site operator, on the normalized chain.
    pub fn local_expectation(&self, site: usize, op: &DenseMatrix<T>) -> Result<Complex<T>> {
        if op.shape() != (self.local_dim, self.local_dim) {
            return Err(Error::invalid("operator dimension does not match the chain"));
        }
        let mut work = self.clone();
        work.move_center_to(site)?;
        let a = &work.sites[site];
        let mut acc = Complex::zero();
        for l in 0..a.left {
            for r in 0..a.right {
                for s in 0..a.phys {
                    for t in 0..a.phys {
                        acc += a.get(l, s, r).conj() * op[(s, t)] * a.get(l, t, r);
                    }
                }
            }
        }
        Ok(acc / work.sites[site].norm_sqr())
    }
}

fn basis_vector<T: Real>(d: usize, k: usize) -> Vec<Complex<T>> {
    let mut v = vec![Complex::zero(); d];
    v[k] = Complex::one();
    v
}

/// `diag(σ) · m`.
fn scale_rows<T: Real>(m: &DenseMatrix<T>, sigma: &[T]) -> DenseMatrix<T> {
    DenseMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)] * sigma[i])
}

/// `m · diag(σ)`.
fn scale_cols<T: Real>(m: &DenseMatrix<T>, sigma: &[T]) -> DenseMatrix<T> {
    DenseMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)] * sigma[j])
}
