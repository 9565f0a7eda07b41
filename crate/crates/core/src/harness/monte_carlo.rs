use rayon::prelude::*;
use serde::Serialize;

use super::config::ScenarioConfig;
use super::run::{run_scenario_with, RunFailure, StepRecord};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    /// Mean and sample standard deviation (zero for a single value).
    /// NaN entries are skipped.
    pub fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let v: Vec<f64> = values.into_iter().filter(|x| !x.is_nan()).collect();
        if v.is_empty() {
            return Self {
                mean: f64::NAN,
                std: f64::NAN,
            };
        }
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let std = if v.len() > 1 {
            (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Self { mean, std }
    }
}

/// Per-step statistics across runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateRow {
    pub k: usize,
    pub ospa: MeanStd,
    pub ospa_loc: MeanStd,
    pub ospa_card: MeanStd,
    pub n_est: MeanStd,
    /// `|n_est - n_true|`.
    pub card_err: MeanStd,
    pub centroid_distance: MeanStd,
    pub ctrl_ms: MeanStd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloResult {
    pub runs: Vec<Vec<StepRecord>>,
    pub aggregate: Vec<AggregateRow>,
}

impl MonteCarloResult {
    /// Mean over `k in [from, to]` of the per-step mean OSPA.
    pub fn window_mean(&self, from: usize, to: usize) -> f64 {
        MeanStd::of(
            self.aggregate
                .iter()
                .filter(|r| (from..=to).contains(&r.k))
                .map(|r| r.ospa.mean),
        )
        .mean
    }

    /// Per-run window means, for standard errors between configurations.
    pub fn run_window_means(&self, from: usize, to: usize) -> Vec<f64> {
        self.runs
            .iter()
            .map(|run| {
                MeanStd::of(run.iter().filter(|r| (from..=to).contains(&r.k)).map(|r| r.ospa)).mean
            })
            .collect()
    }
}

/// Reduces runs of equal length into per-step statistics.
pub fn aggregate(runs: &[Vec<StepRecord>]) -> Vec<AggregateRow> {
    let steps = runs.iter().map(Vec::len).min().unwrap_or(0);
    (0..steps)
        .map(|i| {
            let col = |f: &dyn Fn(&StepRecord) -> f64| MeanStd::of(runs.iter().map(|r| f(&r[i])));
            AggregateRow {
                k: runs[0][i].k,
                ospa: col(&|r| r.ospa),
                ospa_loc: col(&|r| r.ospa_loc),
                ospa_card: col(&|r| r.ospa_card),
                n_est: col(&|r| r.n_est as f64),
                card_err: col(&|r| (r.n_est as f64 - r.n_true as f64).abs()),
                centroid_distance: col(&|r| r.centroid_distance),
                ctrl_ms: col(&|r| r.ctrl_ms),
            }
        })
        .collect()
}

/// Runs seeds `seed, seed + 1, ..` on `parallelism` worker threads. Results are
/// collected in seed order, so the aggregate does not depend on scheduling.
pub fn run_monte_carlo(
    config: &ScenarioConfig,
    runs: usize,
    parallelism: usize,
) -> Result<MonteCarloResult, RunFailure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .expect("thread pool");
    let outcomes: Vec<Result<Vec<StepRecord>, RunFailure>> = pool.install(|| {
        (0..runs as u64)
            .into_par_iter()
            .map(|i| run_scenario_with(config, config.seed.wrapping_add(i), None))
            .collect()
    });
    let runs = outcomes.into_iter().collect::<Result<Vec<_>, _>>()?;
    let aggregate = aggregate(&runs);
    Ok(MonteCarloResult { runs, aggregate })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_std_basics() {
        let s = MeanStd::of([1.0, 3.0]);
        assert_eq!(s.mean, 2.0);
        assert!((s.std - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(MeanStd::of([4.0]).std, 0.0);
        assert_eq!(MeanStd::of([f64::NAN, 4.0]).mean, 4.0);
    }

    #[test]
    fn single_run_aggregate_equals_run() {
        let mut c = ScenarioConfig::preset("case1").unwrap();
        c.duration = 3;
        c.filter.birth_particles = 100;
        let mc = run_monte_carlo(&c, 1, 1).unwrap();
        for (row, rec) in mc.aggregate.iter().zip(&mc.runs[0]) {
            assert_eq!(row.ospa.mean, rec.ospa);
            assert_eq!(row.n_est.mean, rec.n_est as f64);
        }
    }
}
