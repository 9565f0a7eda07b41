//! Shared particle machinery: weighted clouds, Bernoulli components,
//! multi-Bernoulli densities, resampling and seeded randomness.

mod particles;
mod random;

pub use particles::{
    normalize_slice, normalize_weights, resample, systematic_resample, weighted_mean,
    BernoulliComponent, BernoulliLike, MultiBernoulliDensity, Particle, ParticleBudget,
    StateVector, MIN_WEIGHT_TOTAL,
};
pub use random::RandomSource;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum RfsError {
    #[error("all particle weights are zero")]
    AllWeightsZero,
}
