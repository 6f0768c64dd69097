//! Seeded Monte Carlo experiments: configuration, trials, sweeps and persistence.

pub mod config;
pub mod persist;
pub mod sweep;
pub mod trial;

pub use config::{
    CouplingKind, EstimatorKind, ExperimentConfig, PopulationTemplate, Preset, RadialKind, Schedule,
};
pub use persist::{parse_trial_line, parse_trials, read_summary, read_trials, write_results};
pub use sweep::{run_sweep, PairSummary, SweepOutcome, SweepSummary, VarianceProbe};
pub use trial::{run_trial, EstimateRecord, TrialResult, TrialRun, TylerDiagnostics};
