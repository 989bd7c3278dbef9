use num_complex::Complex;

use super::disorder::DisorderRealization;
use super::params::ModelParams;
use super::pauli::spin;
use crate::error::{Error, Result};
use crate::kernel::DenseMatrix;
use crate::scalar::Real;

/// How site fields are distributed over bond terms.
pub const FIELD_SPLITTING: &str = "interior site fields split half/half between adjacent bonds; edge site fields fully on their single bond";

/// 4×4 bond term on bond `bond` (sites `bond`, `bond + 1`): exchange plus
/// the share of the site fields assigned by [`FIELD_SPLITTING`]. Summing all
/// bond terms reproduces the full Hamiltonian.
pub fn bond_hamiltonian<T: Real>(
    params: &ModelParams<T>,
    realization: &DisorderRealization<T>,
    bond: usize,
) -> Result<DenseMatrix<T>> {
    let n = params.n;
    if realization.n() != n {
        return Err(Error::invalid(format!("realization has {} fields for {n} sites", realization.n())));
    }
    if bond + 1 >= n {
        return Err(Error::OutOfRange { what: "bond", index: bond, len: n - 1 });
    }
    let half = T::lit(0.5);
    let w_left = if bond == 0 { T::one() } else { half };
    let w_right = if bond + 2 == n { T::one() } else { half };

    let id = DenseMatrix::<T>::identity(2);
    let (sx, sy, sz) = (spin::<T>(1), spin::<T>(2), spin::<T>(3));
    let real = |x: T| Complex::new(x, T::zero());
    let exchange = sx.kron(&sx).add(&sy.kron(&sy))?.add(&sz.kron(&sz).scale(real(params.delta)))?;
    let field_left = sz.kron(&id).scale(real(w_left * realization.fields[bond]));
    let field_right = id.kron(&sz).scale(real(w_right * realization.fields[bond + 1]));
    let h = exchange.add(&field_left)?.add(&field_right)?;
    Ok(symmetrize(h))
}

/// Averages `h` with `h†`, making Hermiticity exact in floating point.
fn symmetrize<T: Real>(h: DenseMatrix<T>) -> DenseMatrix<T> {
    let adj = h.adjoint();
    let half = Complex::new(T::lit(0.5), T::zero());
    h.add(&adj).expect("square").scale(half)
}
