use serde::{Deserialize, Serialize};

use crate::rfs::{BernoulliLike, StateVector};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MultiTargetEstimate {
    pub states: Vec<StateVector>,
}

impl MultiTargetEstimate {
    pub fn count(&self) -> usize {
        self.states.len()
    }

    pub fn positions(&self) -> Vec<[f64; 2]> {
        self.states.iter().map(|s| [s[0], s[1]]).collect()
    }
}

/// Tracks with existence strictly above `threshold`, each reported at its EAP mean.
pub fn extract_estimate<B: BernoulliLike>(components: &[B], threshold: f64) -> MultiTargetEstimate {
    MultiTargetEstimate {
        states: components
            .iter()
            .filter(|c| c.existence() > threshold)
            .map(|c| c.eap_mean())
            .collect(),
    }
}
