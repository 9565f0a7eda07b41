//! Particle cardinality-balanced multi-Bernoulli filter.
//!
//! One recursion is [`predict`] → [`update`] → [`prune_merge_resample`], with
//! [`extract_estimate`] reading the multi-target state off any density.
//!
//! The update never copies particle states: legacy and measurement-corrected
//! tracks are weight vectors over the predicted particles (see
//! [`UpdatedDensity`]). Sensor control evaluates many hypothetical updates per
//! step and reads its cost straight off these views; only the final track
//! management step materializes new particle clouds.

mod estimate;
mod manage;
mod predict;
mod update;

use serde::{Deserialize, Serialize};

pub use estimate::{extract_estimate, MultiTargetEstimate};
pub use manage::prune_merge_resample;
pub use predict::{predict, PredictedDensity};
pub use update::{update, ComponentView, PooledComponent, UpdatedDensity};

use crate::models::ModelError;
use crate::rfs::{ParticleBudget, RfsError};

/// Floor for `1 - r * rho_L` in the update denominators.
pub const MIN_MISS_DENOMINATOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FilterError {
    #[error("non-finite measurement likelihood for measurement {measurement}")]
    NonFiniteLikelihood { measurement: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Particles(#[from] RfsError),
}

/// Track-management and estimation parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterParams {
    pub budget: ParticleBudget,
    /// Particles drawn for each birth component.
    pub birth_particles: usize,
    pub prune_threshold: f64,
    /// Position distance (m) under which track estimates are merged.
    pub merge_distance: f64,
    pub max_components: usize,
    /// Existence threshold for state extraction and PIMS construction.
    pub existence_threshold: f64,
    /// Ceiling on existence probabilities kept after track management.
    pub max_existence: f64,
}

impl Default for FilterParams {
    fn default() -> Self {
        Self {
            budget: ParticleBudget::default(),
            birth_particles: 500,
            prune_threshold: 1e-3,
            merge_distance: 4.0,
            max_components: 100,
            existence_threshold: 0.5,
            max_existence: 0.999,
        }
    }
}
