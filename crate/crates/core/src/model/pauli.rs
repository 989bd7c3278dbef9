//! Single-site Pauli/spin matrices and the adjoint action of two-site
//! unitaries on the orthonormal Pauli product basis.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::kernel::DenseMatrix;
use crate::scalar::Real;

/// Pauli matrix by index: 0 → I, 1 → σ^x, 2 → σ^y, 3 → σ^z.
pub fn pauli<T: Real>(k: usize) -> DenseMatrix<T> {
    let (o, z, i) = (Complex::<T>::one(), Complex::<T>::zero(), Complex::<T>::i());
    let data = match k {
        0 => vec![o, z, z, o],
        1 => vec![z, o, o, z],
        2 => vec![z, -i, i, z],
        3 => vec![o, z, z, -o],
        _ => panic!("Pauli index {k} out of range"),
    };
    DenseMatrix::from_vec(2, 2, data).expect("2x2")
}

/// Spin-1/2 operator `s^a = σ^a / 2` for `a ∈ {1, 2, 3}`.
pub fn spin<T: Real>(k: usize) -> DenseMatrix<T> {
    pauli::<T>(k).scale(Complex::new(T::lit(0.5), T::zero()))
}

/// Matrix of `X ↦ U† X U` on coefficient vectors in the basis
/// `σ^a ⊗ σ^b` (index `4a + b`), orthonormal under `⟨⟨A|B⟩⟩ = tr(A†B)/4`.
/// Entries are real for any unitary `U`.
pub fn adjoint_action<T: Real>(u: &DenseMatrix<T>) -> DenseMatrix<T> {
    assert_eq!(u.shape(), (4, 4), "two-site unitary expected");
    let basis: Vec<DenseMatrix<T>> = (0..16).map(|k| pauli::<T>(k / 4).kron(&pauli(k % 4))).collect();
    let u_adj = u.adjoint();
    let quarter = T::lit(0.25);
    let mut out = DenseMatrix::zeros(16, 16);
    for (b, pb) in basis.iter().enumerate() {
        let moved = u_adj.matmul(pb).and_then(|m| m.matmul(u)).expect("4x4");
        for (a, pa) in basis.iter().enumerate() {
            // tr(P_a moved); P_a Hermitian
            let tr: Complex<T> = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| pa[(i, j)] * moved[(j, i)]).sum();
            out[(a, b)] = tr * quarter;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paulis_square_to_identity_and_are_orthogonal() {
        for a in 0..4 {
            let sq = pauli::<f64>(a).matmul(&pauli(a)).unwrap();
            assert_eq!(sq, DenseMatrix::identity(2));
            for b in 0..4 {
                let tr = pauli::<f64>(a).matmul(&pauli(b)).unwrap().trace();
                assert_eq!(tr.re, if a == b { 2.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn identity_unitary_acts_trivially() {
        let m = adjoint_action::<f64>(&DenseMatrix::identity(4));
        assert!(m.sub(&DenseMatrix::identity(16)).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn swap_permutes_pauli_labels() {
        let mut swap = DenseMatrix::<f64>::zeros(4, 4);
        for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            swap[(i, j)] = Complex::one();
        }
        let m = adjoint_action(&swap);
        for a in 0..4 {
            for b in 0..4 {
                assert!((m[(b * 4 + a, a * 4 + b)].re - 1.0).abs() < 1e-15);
            }
        }
    }
}
