use rand::seq::SliceRandom;
use rand::RngCore;

use super::config::ScenarioConfig;
use crate::models::{position, sample_clutter, MeasurementSet, Models, SensorState};
use crate::rfs::{RandomSource, StateVector};

/// True target states for `k = 0..=K`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GroundTruth {
    pub steps: Vec<Vec<StateVector>>,
}

impl GroundTruth {
    pub fn at(&self, k: usize) -> &[StateVector] {
        &self.steps[k]
    }

    pub fn positions(&self, k: usize) -> Vec<[f64; 2]> {
        self.steps[k].iter().map(|s| position(s)).collect()
    }
}

/// Propagates every target through the truth motion model; each target draws
/// its noise from its own stream.
pub fn simulate_truth(config: &ScenarioConfig, rng: &RandomSource) -> GroundTruth {
    let mut steps = vec![Vec::new(); config.duration + 1];
    for (i, target) in config.targets.iter().enumerate() {
        let mut target_rng = rng.child(0, i as u64);
        let end = target.death.unwrap_or(usize::MAX).min(config.duration + 1);
        let mut state: StateVector = target.state.iter().copied().collect();
        for (k, step) in steps.iter_mut().enumerate().take(end).skip(target.birth) {
            if k > target.birth {
                state = config.truth_motion.propagate(&state, &mut target_rng);
            }
            step.push(state.clone());
        }
    }
    GroundTruth { steps }
}

/// One scan: each target is detected with its detection probability at
/// `sensor` and measured with model noise, Poisson clutter is appended, and
/// the set is shuffled. Clutter draws from its own stream, seeded by the first
/// draw of `rng`, so the number of detections does not shift it.
pub fn generate_measurements(
    truth: &[StateVector],
    sensor: &SensorState,
    models: &Models,
    rng: &mut RandomSource,
) -> MeasurementSet {
    let mut clutter_rng = RandomSource::new(rng.next_u64());
    let mut z = MeasurementSet::new();
    for state in truth {
        let pos = position(state);
        let pd = models.sensor.geometry(sensor, pos).detection;
        if rng.uniform() < pd {
            if let Ok(m) = models.sensor.sample(sensor, pos, rng) {
                z.push(m);
            }
        }
    }
    z.extend(sample_clutter(&models.clutter, &mut clutter_rng));
    z.shuffle(rng);
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{ClutterModel, DetectionProfile, RangeSensorModel, SensorModel};
    use smallvec::smallvec;

    fn models(r0: f64, h: f64, sigma0: f64, rate: f64) -> Models {
        let mut m = ScenarioConfig::preset("case1").unwrap().models();
        m.sensor = SensorModel::Range(RangeSensorModel {
            sigma0,
            beta: 0.0,
            profile: DetectionProfile { r0, h },
        });
        m.clutter = ClutterModel {
            rate,
            support: vec![[0.0, 2000.0]],
        };
        m
    }

    #[test]
    fn case1_truth_starts_at_initial_states() {
        let c = ScenarioConfig::preset("case1").unwrap();
        let t = simulate_truth(&c, &RandomSource::new(1));
        assert_eq!(t.steps.len(), 36);
        assert_eq!(t.at(0)[0].as_slice(), &[800.0, 600.0, 1.0, 0.0]);
        assert!(t.steps.iter().all(|s| s.len() == 5));
    }

    #[test]
    fn noiseless_cv_is_linear() {
        let mut c = ScenarioConfig::preset("case1").unwrap();
        c.duration = 10;
        let t = simulate_truth(&c, &RandomSource::new(3));
        for (i, spec) in c.targets.iter().enumerate() {
            let s = &t.at(10)[i];
            assert!((s[0] - (spec.state[0] + 10.0 * spec.state[2])).abs() < 1e-9);
            assert!((s[1] - (spec.state[1] + 10.0 * spec.state[3])).abs() < 1e-9);
        }
        assert_eq!(t, simulate_truth(&c, &RandomSource::new(3)));
    }

    #[test]
    fn case2_targets_stay_in_region() {
        let c = ScenarioConfig::preset("case2").unwrap();
        let t = simulate_truth(&c, &RandomSource::new(0));
        for step in &t.steps {
            assert_eq!(step.len(), 4);
            for s in step {
                assert!(c.region.contains(position(s)), "{s:?}");
            }
        }
    }

    #[test]
    fn births_and_deaths_apply() {
        let mut c = ScenarioConfig::preset("case1").unwrap();
        c.duration = 6;
        c.targets.truncate(2);
        c.targets[1].birth = 2;
        c.targets[1].death = Some(4);
        let t = simulate_truth(&c, &RandomSource::new(0));
        let counts: Vec<usize> = t.steps.iter().map(Vec::len).collect();
        assert_eq!(counts, vec![1, 1, 2, 2, 1, 1, 1]);
        assert_eq!(t.at(2)[1].as_slice(), c.targets[1].state.as_slice());
    }

    #[test]
    fn perfect_detection_gives_ideal_measurements() {
        let m = models(1e9, 0.0, 1e-12, 0.0);
        let truth: Vec<StateVector> = vec![smallvec![300.0, 400.0, 0.0, 0.0], smallvec![0.0, 100.0, 0.0, 0.0]];
        let mut rng = RandomSource::new(0);
        let mut z = generate_measurements(&truth, &SensorState::new(0.0, 0.0), &m, &mut rng);
        z.sort_by(|a, b| a[0].total_cmp(&b[0]));
        assert_eq!(z.len(), 2);
        assert!((z[0][0] - 100.0).abs() < 1e-9 && (z[1][0] - 500.0).abs() < 1e-9);
    }

    #[test]
    fn no_detection_no_clutter_is_empty() {
        let m = models(0.0, 1.0, 1.0, 0.0);
        let truth: Vec<StateVector> = vec![smallvec![300.0, 400.0, 0.0, 0.0]];
        let mut rng = RandomSource::new(0);
        assert!(generate_measurements(&truth, &SensorState::new(0.0, 0.0), &m, &mut rng).is_empty());
    }

    #[test]
    fn mean_scan_size_with_clutter() {
        let m = models(320.0, 0.00025, 1.0, 5.0);
        let truth: Vec<StateVector> = (0..5).map(|i| smallvec![50.0 * i as f64, 100.0, 0.0, 0.0]).collect();
        let mut rng = RandomSource::new(9);
        let scans = 10_000;
        let total: usize = (0..scans)
            .map(|_| generate_measurements(&truth, &SensorState::new(0.0, 0.0), &m, &mut rng).len())
            .sum();
        let mean = total as f64 / scans as f64;
        assert!((mean - 10.0).abs() < 0.3, "{mean}");
    }
}
