//! Measurement models: range-only with distance-dependent noise, and
//! bearing-range with constant noise.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use smallvec::{smallvec, SmallVec};

use super::detection::{DetectionProfile, SensorState};
use super::ModelError;
use crate::rfs::RandomSource;

/// A single observation: `[range]` or `[bearing, range]`.
pub type Measurement = SmallVec<[f64; 2]>;
pub type MeasurementSet = Vec<Measurement>;

/// Ranges below this make the bearing undefined.
pub const MIN_RANGE: f64 = 1e-6;

const INV_SQRT_TAU: f64 = 0.398_942_280_401_432_7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeSensorModel {
    pub sigma0: f64,
    pub beta: f64,
    pub profile: DetectionProfile,
}

impl RangeSensorModel {
    /// Noise standard deviation at a given true range: `sigma0 + beta * d^2`.
    pub fn sigma_at(&self, distance: f64) -> f64 {
        self.sigma0 + self.beta * distance * distance
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BearingRangeSensorModel {
    pub sigma_theta: f64,
    pub sigma_r: f64,
    pub profile: DetectionProfile,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SensorModel {
    Range(RangeSensorModel),
    BearingRange(BearingRangeSensorModel),
}

/// Sensor-relative geometry of one state, computed once and reused across
/// every measurement in a scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub range: f64,
    /// Angle from the +y axis, `atan2(dx, dy)`; zero for range-only models.
    pub bearing: f64,
    pub detection: f64,
}

/// Wraps an angle to `(-pi, pi]`.
pub fn wrap_angle(mut a: f64) -> f64 {
    if a.abs() > 64.0 * PI {
        a = (a + PI).rem_euclid(TAU) - PI;
    }
    while a > PI {
        a -= TAU;
    }
    while a <= -PI {
        a += TAU;
    }
    a
}

/// Beyond this squared Mahalanobis distance `exp(-q / 2)` underflows to zero.
const UNDERFLOW_Q: f64 = 1492.0;

/// The likelihood of one state as a diagonal Gaussian in measurement space,
/// `norm * exp(-q / 2)` with `q = sum(((z - center) * inv_sigma)^2)`. Building
/// it once per state makes every further measurement cost a single `exp`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianTerms {
    pub center: [f64; 2],
    pub inv_sigma: [f64; 2],
    pub norm: f64,
}

impl SensorModel {
    pub fn profile(&self) -> &DetectionProfile {
        match self {
            SensorModel::Range(m) => &m.profile,
            SensorModel::BearingRange(m) => &m.profile,
        }
    }

    pub fn measurement_dim(&self) -> usize {
        match self {
            SensorModel::Range(_) => 1,
            SensorModel::BearingRange(_) => 2,
        }
    }

    pub fn geometry(&self, sensor: &SensorState, position: [f64; 2]) -> Geometry {
        let dx = position[0] - sensor.x();
        let dy = position[1] - sensor.y();
        let range = (dx * dx + dy * dy).sqrt();
        let bearing = match self {
            SensorModel::Range(_) => 0.0,
            SensorModel::BearingRange(_) => dx.atan2(dy),
        };
        Geometry {
            range,
            bearing,
            detection: self.profile().at_distance(range),
        }
    }

    pub fn gaussian_terms(&self, geo: &Geometry) -> Result<GaussianTerms, ModelError> {
        match self {
            SensorModel::Range(m) => {
                let inv = 1.0 / m.sigma_at(geo.range);
                Ok(GaussianTerms {
                    center: [geo.range, 0.0],
                    inv_sigma: [inv, 0.0],
                    norm: INV_SQRT_TAU * inv,
                })
            }
            SensorModel::BearingRange(m) => {
                if geo.range < MIN_RANGE {
                    return Err(ModelError::DegenerateGeometry { range: geo.range });
                }
                let (it, ir) = (1.0 / m.sigma_theta, 1.0 / m.sigma_r);
                Ok(GaussianTerms {
                    center: [geo.bearing, geo.range],
                    inv_sigma: [it, ir],
                    norm: INV_SQRT_TAU * INV_SQRT_TAU * it * ir,
                })
            }
        }
    }

    /// Measurement padded to two coordinates, bearings wrapped.
    pub fn prepare(&self, z: &[f64]) -> [f64; 2] {
        match self {
            SensorModel::Range(_) => [z[0], 0.0],
            SensorModel::BearingRange(_) => [wrap_angle(z[0]), z[1]],
        }
    }

    /// `g(z | x)` for a [`prepare`](Self::prepare)d measurement.
    #[inline]
    pub fn eval_terms(&self, z: &[f64; 2], t: &GaussianTerms) -> f64 {
        let mut d0 = z[0] - t.center[0];
        if let SensorModel::BearingRange(_) = self {
            d0 = wrap_angle(d0);
        }
        let u0 = d0 * t.inv_sigma[0];
        let u1 = (z[1] - t.center[1]) * t.inv_sigma[1];
        let q = u0 * u0 + u1 * u1;
        if q > UNDERFLOW_Q {
            0.0
        } else {
            t.norm * (-0.5 * q).exp()
        }
    }

    /// `g(z | x)` from precomputed geometry.
    pub fn likelihood_at(&self, z: &[f64], geo: &Geometry) -> Result<f64, ModelError> {
        Ok(self.eval_terms(&self.prepare(z), &self.gaussian_terms(geo)?))
    }

    pub fn likelihood(
        &self,
        z: &[f64],
        sensor: &SensorState,
        position: [f64; 2],
    ) -> Result<f64, ModelError> {
        self.likelihood_at(z, &self.geometry(sensor, position))
    }

    /// The noiseless measurement, which maximizes the likelihood.
    pub fn ideal_measurement(
        &self,
        sensor: &SensorState,
        position: [f64; 2],
    ) -> Result<Measurement, ModelError> {
        let geo = self.geometry(sensor, position);
        match self {
            SensorModel::Range(_) => Ok(smallvec![geo.range]),
            SensorModel::BearingRange(_) => {
                if geo.range < MIN_RANGE {
                    return Err(ModelError::DegenerateGeometry { range: geo.range });
                }
                Ok(smallvec![geo.bearing, geo.range])
            }
        }
    }

    /// Draws a noisy measurement of an object at `position`.
    pub fn sample(
        &self,
        sensor: &SensorState,
        position: [f64; 2],
        rng: &mut RandomSource,
    ) -> Result<Measurement, ModelError> {
        let geo = self.geometry(sensor, position);
        match self {
            SensorModel::Range(m) => {
                Ok(smallvec![geo.range + m.sigma_at(geo.range) * rng.standard_normal()])
            }
            SensorModel::BearingRange(m) => {
                if geo.range < MIN_RANGE {
                    return Err(ModelError::DegenerateGeometry { range: geo.range });
                }
                let bearing = wrap_angle(geo.bearing + m.sigma_theta * rng.standard_normal());
                let range = geo.range + m.sigma_r * rng.standard_normal();
                Ok(smallvec![bearing, range])
            }
        }
    }
}

pub fn range_likelihood(
    z: f64,
    sensor: &SensorState,
    position: [f64; 2],
    model: &RangeSensorModel,
) -> f64 {
    SensorModel::Range(*model)
        .likelihood(&[z], sensor, position)
        .expect("range likelihood is defined everywhere")
}

pub fn bearing_range_likelihood(
    z: [f64; 2],
    sensor: &SensorState,
    position: [f64; 2],
    model: &BearingRangeSensorModel,
) -> Result<f64, ModelError> {
    SensorModel::BearingRange(*model).likelihood(&z, sensor, position)
}
