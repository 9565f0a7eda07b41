use std::time::Instant;

use serde::Serialize;

use super::config::ScenarioConfig;
use super::truth::{generate_measurements, simulate_truth};
use crate::cbmember::{extract_estimate, predict, prune_merge_resample, update, FilterError};
use crate::control::{select_command, ControlContext, ControlError};
use crate::metrics::{ospa, MetricsError};
use crate::models::{position, MeasurementSet, Models, SensorState};
use crate::rfs::{MultiBernoulliDensity, RandomSource, StateVector};

// Child-stream tags of a run's root stream.
const TRUTH_STREAM: u64 = 1;
const MEASUREMENT_STREAM: u64 = 2;
const FILTER_STREAM: u64 = 3;

#[derive(Debug, thiserror::Error)]
pub enum StepError {
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Control(#[from] ControlError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepRecord {
    pub k: usize,
    pub n_true: usize,
    pub n_est: usize,
    pub ospa: f64,
    pub ospa_loc: f64,
    pub ospa_card: f64,
    pub sensor_x: f64,
    pub sensor_y: f64,
    pub cmd_id: usize,
    pub cost: f64,
    /// Wall-clock time of command selection.
    pub ctrl_ms: f64,
    /// Sensor distance to the centroid of the true positions (NaN if none).
    pub centroid_distance: f64,
    pub command_costs: Vec<f64>,
}

/// Filter density plus sensor pose carried between steps.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterState {
    pub density: MultiBernoulliDensity,
    pub sensor: SensorState,
}

impl FilterState {
    pub fn initial(config: &ScenarioConfig) -> Self {
        Self {
            density: MultiBernoulliDensity::empty(),
            sensor: config.initial_sensor(),
        }
    }
}

/// Optional hook replacing the simulated scan, used to force measurement sets.
pub type ScanOverride<'a> = &'a dyn Fn(usize) -> Option<MeasurementSet>;

/// A run that stopped early: the records produced so far and the cause.
#[derive(Debug, thiserror::Error)]
#[error("step {step} failed: {error}")]
pub struct RunFailure {
    pub step: usize,
    pub records: Vec<StepRecord>,
    #[source]
    pub error: StepError,
}

fn centroid_distance(sensor: &SensorState, truth: &[[f64; 2]]) -> f64 {
    if truth.is_empty() {
        return f64::NAN;
    }
    let n = truth.len() as f64;
    let cx = truth.iter().map(|p| p[0]).sum::<f64>() / n;
    let cy = truth.iter().map(|p| p[1]).sum::<f64>() / n;
    sensor.distance_to([cx, cy])
}

/// One closed-loop step at time `k`: predict, choose and apply a command,
/// measure, update, manage tracks, estimate, score.
pub fn run_step(
    state: &FilterState,
    k: usize,
    truth: &[StateVector],
    config: &ScenarioConfig,
    models: &Models,
    root: &RandomSource,
    scan: Option<MeasurementSet>,
) -> Result<(FilterState, StepRecord), StepError> {
    let mut filter_rng = root.child(FILTER_STREAM, k as u64);
    let mut measurement_rng = root.child(MEASUREMENT_STREAM, k as u64);

    let predicted = predict(
        &state.density,
        &models.motion,
        &models.birth,
        &config.filter,
        &mut filter_rng,
    );

    let ctx = ControlContext {
        sensor: &models.sensor,
        clutter: &models.clutter,
        params: &config.control,
        region: &config.region,
        existence_threshold: config.filter.existence_threshold,
    };
    let started = Instant::now();
    let selection = select_command(&predicted, &state.sensor, &ctx)?;
    let ctrl_ms = started.elapsed().as_secs_f64() * 1e3;
    let sensor = selection.chosen.target;

    let z = scan.unwrap_or_else(|| generate_measurements(truth, &sensor, models, &mut measurement_rng));
    let updated = update(&predicted, &z, &sensor, &models.sensor, &models.clutter)?;
    let density = prune_merge_resample(&updated.views(), &config.filter, &mut filter_rng);
    let estimate = extract_estimate(&density.components, config.filter.existence_threshold);

    let truth_pos: Vec<[f64; 2]> = truth.iter().map(|s| position(s)).collect();
    let score = ospa(&truth_pos, &estimate.positions(), &config.ospa)?;

    let record = StepRecord {
        k,
        n_true: truth.len(),
        n_est: estimate.count(),
        ospa: score.total,
        ospa_loc: score.localization,
        ospa_card: score.cardinality,
        sensor_x: sensor.x(),
        sensor_y: sensor.y(),
        cmd_id: selection.chosen.id,
        cost: selection.cost.total,
        ctrl_ms,
        centroid_distance: centroid_distance(&sensor, &truth_pos),
        command_costs: selection.evaluations.iter().map(|e| e.cost.total).collect(),
    };
    Ok((FilterState { density, sensor }, record))
}

/// Runs steps `k = 1..=K` with the config's seed.
pub fn run_scenario(config: &ScenarioConfig) -> Result<Vec<StepRecord>, RunFailure> {
    run_scenario_with(config, config.seed, None)
}

/// Runs with an explicit seed; `scans` may replace the simulated scan of any step.
pub fn run_scenario_with(
    config: &ScenarioConfig,
    seed: u64,
    scans: Option<ScanOverride<'_>>,
) -> Result<Vec<StepRecord>, RunFailure> {
    let root = RandomSource::new(seed);
    let truth = simulate_truth(config, &root.child(TRUTH_STREAM, 0));
    let models = config.models();
    let mut state = FilterState::initial(config);
    let mut records = Vec::with_capacity(config.duration);
    for k in 1..=config.duration {
        let scan = scans.and_then(|f| f(k));
        match run_step(&state, k, truth.at(k), config, &models, &root, scan) {
            Ok((next, record)) => {
                state = next;
                records.push(record);
            }
            Err(error) => {
                return Err(RunFailure {
                    step: k,
                    records,
                    error,
                })
            }
        }
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::BirthModel;

    #[test]
    fn zero_duration_is_empty() {
        let mut c = ScenarioConfig::preset("case1").unwrap();
        c.duration = 0;
        assert!(run_scenario(&c).unwrap().is_empty());
    }

    #[test]
    fn no_births_no_measurements_gives_cutoff() {
        let mut c = ScenarioConfig::preset("case1").unwrap();
        c.duration = 1;
        c.birth = BirthModel::default();
        let forced = |_: usize| Some(MeasurementSet::new());
        let recs = run_scenario_with(&c, 0, Some(&forced)).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].n_est, 0);
        assert_eq!(recs[0].ospa, c.ospa.cutoff);
    }

    #[test]
    fn stay_only_grid_never_moves() {
        let mut c = ScenarioConfig::preset("case1").unwrap();
        c.duration = 4;
        c.control.grid.step = 0.0;
        c.filter.birth_particles = 100;
        for r in run_scenario(&c).unwrap() {
            assert_eq!([r.sensor_x, r.sensor_y], c.sensor_start);
            assert_eq!(r.cmd_id, 0);
        }
    }

    #[test]
    fn same_seed_same_records() {
        let mut c = ScenarioConfig::preset("case1").unwrap();
        c.duration = 3;
        c.filter.birth_particles = 100;
        let strip = |mut v: Vec<StepRecord>| {
            v.iter_mut().for_each(|r| r.ctrl_ms = 0.0);
            v
        };
        let a = strip(run_scenario_with(&c, 5, None).unwrap());
        let b = strip(run_scenario_with(&c, 5, None).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
    }
}
