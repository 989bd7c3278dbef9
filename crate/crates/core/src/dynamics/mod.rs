//! Time evolution drivers and the observables recorded along trajectories.

mod correlation;
mod d_epsilon;
mod evolve;

pub use correlation::{
    correlation_origin, correlation_row, correlation_trajectory, default_offsets, CorrelationGrid, Isoline,
    ISOLINE_LEVELS,
};
pub use d_epsilon::{measure_d_epsilon, DEpsilonCurve};
pub use evolve::{evolve, EntropySample, Evolution, Trajectory, TrajectoryRecord, DEFAULT_ALPHAS};
pub(crate) use evolve::step_count;
