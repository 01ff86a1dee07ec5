//! Observability estimates, admissible ensembles and end-to-end experiments.

mod config;
mod experiment;
mod observe;
mod region;

pub use config::{
    drift_spec, read_matrix, BasisConfig, EnsembleConfig, ExperimentConfig, GeneratorConfig,
    GeometryConfig, MatrixFile, StabilityConfig, TimeGridConfig,
};
pub use experiment::{
    run_experiment, run_experiment_with, AmplitudeSummary, ExperimentReport, LogconvexityRecord,
    LogconvexitySummary, Mode, Records, StabilityRecord, StabilitySummary, Summary,
    VIOLATION_SLACK,
};
pub use observe::{
    estimate_observability, estimate_observability_with, kappa_obs_refinement, observation_factor,
    sample_admissible, ObservabilityEstimate, ObservabilityOptions, OBSERVATION_FLOOR,
};
pub use region::{region_satisfies_cover, Ball, ObservationRegion, RegionKind};
