use serde::{Deserialize, Serialize};

/// Planar sensor pose (position only).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorState {
    pub position: [f64; 2],
}

impl SensorState {
    pub fn new(x: f64, y: f64) -> Self {
        Self { position: [x, y] }
    }

    pub fn x(&self) -> f64 {
        self.position[0]
    }

    pub fn y(&self) -> f64 {
        self.position[1]
    }

    pub fn distance_to(&self, point: [f64; 2]) -> f64 {
        (point[0] - self.position[0]).hypot(point[1] - self.position[1])
    }
}

/// Distance-dependent detection: certain inside `r0`, decaying linearly with slope `h` beyond.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectionProfile {
    pub r0: f64,
    pub h: f64,
}

impl DetectionProfile {
    pub fn at_distance(&self, distance: f64) -> f64 {
        if distance <= self.r0 {
            1.0
        } else {
            (1.0 - self.h * (distance - self.r0)).max(0.0)
        }
    }
}

pub fn detection_probability(
    sensor: &SensorState,
    object_position: [f64; 2],
    profile: &DetectionProfile,
) -> f64 {
    profile.at_distance(sensor.distance_to(object_position))
}

#[cfg(test)]
mod tests {
    use super::*;

    const PROFILE: DetectionProfile = DetectionProfile { r0: 320.0, h: 0.00025 };

    #[test]
    fn examples() {
        let s = SensorState::new(0.0, 0.0);
        assert_eq!(detection_probability(&s, [100.0, 0.0], &PROFILE), 1.0);
        assert!((detection_probability(&s, [1320.0, 0.0], &PROFILE) - 0.75).abs() < 1e-15);
        assert_eq!(detection_probability(&s, [4320.0, 0.0], &PROFILE), 0.0);
        assert_eq!(detection_probability(&s, [0.0, 320.0], &PROFILE), 1.0);
    }

    #[test]
    fn continuous_and_non_increasing() {
        let mut prev = PROFILE.at_distance(0.0);
        let mut d = 0.0;
        while d < 6000.0 {
            d += 0.5;
            let p = PROFILE.at_distance(d);
            assert!(p <= prev);
            assert!(prev - p <= PROFILE.h * 0.5 + 1e-15);
            prev = p;
        }
        let eps = 1e-9;
        assert!((PROFILE.at_distance(320.0 + eps) - 1.0).abs() < 1e-12);
    }
}
