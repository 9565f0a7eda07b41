//! Scenarios, ground truth, the closed control loop, Monte-Carlo runs and
//! CSV output.

mod config;
mod monte_carlo;
mod output;
mod run;
mod truth;

pub use config::{preset_json, ConfigError, ScenarioConfig, TargetSpec, PRESETS};
pub use monte_carlo::{aggregate, run_monte_carlo, AggregateRow, MeanStd, MonteCarloResult};
pub use output::{format_g9, write_aggregate, write_steps, write_sweep, STEP_HEADER};
pub use run::{
    run_scenario, run_scenario_with, run_step, FilterState, RunFailure, ScanOverride, StepError,
    StepRecord,
};
pub use truth::{generate_measurements, simulate_truth, GroundTruth};
