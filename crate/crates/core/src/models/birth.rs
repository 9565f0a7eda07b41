use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::rfs::{RandomSource, StateVector};

/// Single-target state distribution used for births.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateDistribution {
    /// Independent uniform per coordinate.
    Uniform { lower: Vec<f64>, upper: Vec<f64> },
    /// Diagonal Gaussian; `std` holds per-coordinate standard deviations.
    Gaussian { mean: Vec<f64>, std: Vec<f64> },
}

impl StateDistribution {
    pub fn dim(&self) -> usize {
        match self {
            StateDistribution::Uniform { lower, .. } => lower.len(),
            StateDistribution::Gaussian { mean, .. } => mean.len(),
        }
    }

    pub fn sample(&self, rng: &mut RandomSource) -> StateVector {
        match self {
            StateDistribution::Uniform { lower, upper } => lower
                .iter()
                .zip(upper)
                .map(|(&lo, &hi)| rng.uniform_in(lo, hi))
                .collect(),
            StateDistribution::Gaussian { mean, std } => mean
                .iter()
                .zip(std)
                .map(|(&m, &s)| m + s * rng.standard_normal())
                .collect(),
        }
    }

    pub fn density(&self, x: &[f64]) -> f64 {
        match self {
            StateDistribution::Uniform { lower, upper } => {
                let inside = x
                    .iter()
                    .zip(lower.iter().zip(upper))
                    .all(|(v, (lo, hi))| v >= lo && v <= hi);
                if inside {
                    lower.iter().zip(upper).map(|(lo, hi)| 1.0 / (hi - lo)).product()
                } else {
                    0.0
                }
            }
            StateDistribution::Gaussian { mean, std } => x
                .iter()
                .zip(mean.iter().zip(std))
                .map(|(v, (m, s))| {
                    let u = (v - m) / s;
                    (-0.5 * u * u).exp() / (s * TAU.sqrt())
                })
                .product(),
        }
    }

    fn is_valid(&self) -> bool {
        match self {
            StateDistribution::Uniform { lower, upper } => {
                lower.len() == upper.len() && lower.iter().zip(upper).all(|(lo, hi)| hi > lo)
            }
            StateDistribution::Gaussian { mean, std } => {
                mean.len() == std.len() && std.iter().all(|s| *s > 0.0)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BirthComponent {
    pub r: f64,
    pub distribution: StateDistribution,
}

/// Static multi-Bernoulli birth process.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BirthModel {
    pub components: Vec<BirthComponent>,
}

impl BirthModel {
    pub fn is_valid(&self, state_dim: usize) -> bool {
        self.components.iter().all(|c| {
            (0.0..=1.0).contains(&c.r) && c.distribution.dim() == state_dim && c.distribution.is_valid()
        })
    }
}
