use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::sensor::{Measurement, MeasurementSet};
use crate::rfs::RandomSource;

/// Poisson clutter, uniform over an axis-aligned box in measurement space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClutterModel {
    /// Expected clutter count per scan.
    pub rate: f64,
    /// Per-dimension `[lower, upper]` bounds.
    pub support: Vec<[f64; 2]>,
}

impl ClutterModel {
    pub fn volume(&self) -> f64 {
        self.support.iter().map(|[lo, hi]| hi - lo).product()
    }

    pub fn contains(&self, z: &[f64]) -> bool {
        z.len() == self.support.len()
            && z.iter().zip(&self.support).all(|(v, [lo, hi])| *v >= *lo && *v <= *hi)
    }

    /// Spatial density `c(z)`.
    pub fn density(&self, z: &[f64]) -> f64 {
        if self.contains(z) {
            1.0 / self.volume()
        } else {
            0.0
        }
    }

    /// Clutter intensity `lambda_c * c(z)`.
    pub fn intensity(&self, z: &[f64]) -> f64 {
        if self.rate == 0.0 {
            0.0
        } else {
            self.rate * self.density(z)
        }
    }

    pub fn is_valid(&self) -> bool {
        self.rate >= 0.0
            && self.rate.is_finite()
            && !self.support.is_empty()
            && self.support.iter().all(|[lo, hi]| lo.is_finite() && hi.is_finite() && hi > lo)
    }
}

pub fn sample_clutter(model: &ClutterModel, rng: &mut RandomSource) -> MeasurementSet {
    if model.rate <= 0.0 {
        return Vec::new();
    }
    let count = Poisson::new(model.rate)
        .expect("positive finite clutter rate")
        .sample(rng) as usize;
    (0..count)
        .map(|_| {
            model
                .support
                .iter()
                .map(|&[lo, hi]| rng.uniform_in(lo, hi))
                .collect::<SmallVec<_>>()
        })
        .collect::<Vec<Measurement>>()
}
