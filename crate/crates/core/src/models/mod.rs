//! Motion, measurement, detection, clutter and birth models.

mod birth;
mod clutter;
mod detection;
mod motion;
mod sensor;

pub use birth::{BirthComponent, BirthModel, StateDistribution};
pub use clutter::{sample_clutter, ClutterModel};
pub use detection::{detection_probability, DetectionProfile, SensorState};
pub use motion::{
    coordinated_turn, propagate_ct, propagate_cv, MotionKind, MotionModel, TURN_RATE_EPS,
};
pub use sensor::{
    bearing_range_likelihood, range_likelihood, wrap_angle, BearingRangeSensorModel, GaussianTerms,
    Geometry, Measurement, MeasurementSet, RangeSensorModel, SensorModel, MIN_RANGE,
};

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("object within {range} m of the sensor: bearing undefined")]
    DegenerateGeometry { range: f64 },
}

/// The full set of models one filter step needs.
#[derive(Debug, Clone, PartialEq)]
pub struct Models {
    pub motion: MotionModel,
    pub sensor: SensorModel,
    pub clutter: ClutterModel,
    pub birth: BirthModel,
}

/// Position part `[x, y]` of a state vector.
#[inline]
pub fn position(state: &[f64]) -> [f64; 2] {
    [state[0], state[1]]
}
