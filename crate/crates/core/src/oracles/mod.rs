//! Independent reference engines: exact diagonalization of small chains and
//! the free-fermion propagator of the `Δ = 0` chain. These use `nalgebra`'s
//! symmetric eigensolver and share no numerical code with the tensor-network
//! path.

mod ed;
mod free_fermion;

pub use ed::{dense_hamiltonian, ed_correlation, ed_evolve, DenseState, ExactXxz, ED_MAX_SITES};
pub use free_fermion::{free_fermion_correlation, FreeFermionChain, SingleParticlePropagator};
