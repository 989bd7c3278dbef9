//! Matrix-product chains for pure states (`d = 2`) and operator super-kets in
//! the orthonormal Pauli basis (`d = 4`).

mod chain;
mod checkpoint;
mod entropy;
mod ledger;

pub use chain::{GateOutcome, MatrixProductChain, SiteTensor, PAULI_I, PAULI_X, PAULI_Y, PAULI_Z};
pub use entropy::{avg_entropy_over_cuts, max_entropy_over_cuts, SchmidtSpectrum};
pub use ledger::{GateRecord, TruncationLedger};
