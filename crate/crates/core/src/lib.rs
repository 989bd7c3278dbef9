//! Time-evolving block decimation for the disordered XXZ spin chain.
//!
//! The numerical core is generic over the real scalar (`f32` or `f64`); the
//! aliases below fix it to `f64`, which is what the oracles and the
//! experiment layer use.

pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod kernel;
pub mod model;
pub mod mps;
pub mod oracles;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Matrix = kernel::DenseMatrix<f64>;
pub type Svd = kernel::SvdResult<f64>;
pub type Policy = kernel::TruncationPolicy<f64>;
pub type Chain = mps::MatrixProductChain<f64>;
pub type Ledger = mps::TruncationLedger<f64>;
pub type Params = model::ModelParams<f64>;
pub type Realization = model::DisorderRealization<f64>;
pub type Schedule = model::TrotterSchedule<f64>;
pub type Record = dynamics::TrajectoryRecord<f64>;
pub type Grid = dynamics::CorrelationGrid<f64>;
pub type Curve = dynamics::DEpsilonCurve<f64>;
