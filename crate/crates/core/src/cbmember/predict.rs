use std::ops::Deref;

use super::FilterParams;
use crate::models::{BirthModel, MotionModel};
use crate::rfs::{
    normalize_weights, BernoulliComponent, MultiBernoulliDensity, Particle, RandomSource,
};

/// Predicted multi-Bernoulli density: surviving tracks followed by births.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PredictedDensity {
    density: MultiBernoulliDensity,
    /// Surviving tracks dropped because their weights degenerated.
    pub dropped: usize,
}

impl PredictedDensity {
    /// Wraps an already-predicted density, e.g. for hypothetical evaluation.
    pub fn from_density(density: MultiBernoulliDensity) -> Self {
        Self {
            density,
            dropped: 0,
        }
    }

    pub fn density(&self) -> &MultiBernoulliDensity {
        &self.density
    }

    pub fn into_density(self) -> MultiBernoulliDensity {
        self.density
    }
}

impl Deref for PredictedDensity {
    type Target = MultiBernoulliDensity;

    fn deref(&self) -> &MultiBernoulliDensity {
        &self.density
    }
}

/// Prediction with bootstrap proposals: survivors are propagated through the
/// transition density and births sampled from their own densities, so the
/// importance ratios are one and only the survival factor reweights.
pub fn predict(
    prior: &MultiBernoulliDensity,
    motion: &MotionModel,
    birth: &BirthModel,
    params: &FilterParams,
    rng: &mut RandomSource,
) -> PredictedDensity {
    let mut components = Vec::with_capacity(prior.len() + birth.components.len());
    let mut dropped = 0;

    for track in &prior.components {
        let mut survival_mass = 0.0;
        let mut particles: Vec<Particle> = track
            .particles
            .iter()
            .map(|p| {
                let ps = motion.survival(&p.state);
                survival_mass += p.weight * ps;
                Particle {
                    state: motion.propagate(&p.state, rng),
                    weight: p.weight * ps,
                }
            })
            .collect();
        let r = (track.r * survival_mass).clamp(0.0, 1.0);
        if normalize_weights(&mut particles).is_err() {
            if r == 0.0 && !particles.is_empty() {
                // Nothing survives; keep the slot so component indices line up.
                let w = 1.0 / particles.len() as f64;
                particles.iter_mut().for_each(|p| p.weight = w);
            } else {
                dropped += 1;
                continue;
            }
        }
        components.push(BernoulliComponent::new(r, particles));
    }

    for b in &birth.components {
        let n = params.birth_particles.max(1);
        let states = (0..n).map(|_| b.distribution.sample(rng));
        components.push(BernoulliComponent::from_states(b.r, states));
    }

    PredictedDensity {
        density: MultiBernoulliDensity::new(components),
        dropped,
    }
}
