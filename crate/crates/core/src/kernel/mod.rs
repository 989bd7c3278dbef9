//! Dense complex linear algebra: matrices, QR, SVD with truncation, and a small
//! Hermitian eigensolver used to exponentiate bond Hamiltonians.

mod eigen;
mod matrix;
mod qr;
mod svd;
mod truncate;

pub use eigen::{hermitian_eigen, HermitianEigen};
pub use matrix::DenseMatrix;
pub use qr::{qr, QrResult};
pub use svd::{svd, SvdResult};
pub use truncate::{truncate, TruncationPolicy};
