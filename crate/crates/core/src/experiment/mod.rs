//! Ensemble runs: configuration, seed derivation, per-realization outputs,
//! aggregation and named presets.

mod aggregate;
mod config;
mod ensemble;
mod presets;
mod seeds;

pub use aggregate::{aggregate_files, aggregate_tables, Aggregate, Table};
pub use config::{ExperimentConfig, Mode};
pub use ensemble::{
    run_ensemble, sample_times, EnsembleResult, UnitReport, UnitStatus, AGGREGATE_FILE, DISORDER_FILE,
    ISOLINES_FILE, MANIFEST_FILE,
};
pub use presets::{preset, preset_names, Preset};
pub use seeds::{child_seed, realization_seed, state_seed, SEED_SCHEME};
