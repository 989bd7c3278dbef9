//! Heisenberg XXZ chain in a site-dependent longitudinal field,
//!
//! ```text
//! H = Σ_j (s^x_j s^x_{j+1} + s^y_j s^y_{j+1} + Δ s^z_j s^z_{j+1}) + Σ_j h_j s^z_j,
//! ```
//!
//! with open boundaries, and its second-order Trotter gate schedule.
//!
//! Local basis: index 0 is spin up (`s^z = +1/2`), index 1 spin down. Sites
//! and bonds are numbered from zero; bond `b` couples sites `b` and `b + 1`.

mod disorder;
mod hamiltonian;
mod params;
pub mod pauli;
mod schedule;

pub use disorder::{sample_disorder, DisorderRealization};
pub use hamiltonian::{bond_hamiltonian, FIELD_SPLITTING};
pub use params::{FieldKind, ModelParams};
pub use schedule::{build_schedule, Picture, TrotterSchedule, TwoSiteGate};
