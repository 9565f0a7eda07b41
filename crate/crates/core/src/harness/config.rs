use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cbmember::FilterParams;
use crate::control::{ControlParams, Region};
use crate::metrics::OspaParams;
use crate::models::{BirthModel, ClutterModel, MotionModel, Models, SensorModel, SensorState};

const CASE1: &str = include_str!("../../presets/case1.json");
const CASE2: &str = include_str!("../../presets/case2.json");

/// Names accepted by [`ScenarioConfig::preset`].
pub const PRESETS: [&str; 2] = ["case1", "case2"];

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read scenario {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid scenario JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("unknown scenario parameter path {0}")]
    UnknownParam(String),
}

/// One true target: initial state at `birth`, present while `birth <= k < death`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    pub state: Vec<f64>,
    #[serde(default)]
    pub birth: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub death: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub name: String,
    /// Number of filter steps K.
    pub duration: usize,
    #[serde(default)]
    pub seed: u64,
    pub region: Region,
    pub sensor_start: [f64; 2],
    pub targets: Vec<TargetSpec>,
    /// Dynamics used to simulate the truth.
    pub truth_motion: MotionModel,
    /// Dynamics assumed by the filter.
    pub motion: MotionModel,
    pub sensor: SensorModel,
    pub clutter: ClutterModel,
    pub birth: BirthModel,
    #[serde(default)]
    pub filter: FilterParams,
    #[serde(default)]
    pub control: ControlParams,
    #[serde(default)]
    pub ospa: OspaParams,
}

impl ScenarioConfig {
    pub fn preset(name: &str) -> Option<Self> {
        let text = preset_json(name)?;
        Some(serde_json::from_str(text).expect("embedded presets parse"))
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    /// Reads a scenario file; a missing path whose stem names a preset
    /// (`case1`, `case1.json`) resolves to that preset.
    pub fn load(spec: &str) -> Result<Self, ConfigError> {
        let path = Path::new(spec);
        if !path.exists() {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(spec);
            if let Some(config) = Self::preset(stem) {
                return Ok(config);
            }
        }
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: spec.to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Returns a copy with the dotted `path` (e.g. `control.eta`) set to `value`.
    pub fn with_param(&self, path: &str, value: serde_json::Value) -> Result<Self, ConfigError> {
        let mut json = serde_json::to_value(self)?;
        let mut slot = &mut json;
        for key in path.split('.') {
            slot = slot
                .get_mut(key)
                .ok_or_else(|| ConfigError::UnknownParam(path.to_string()))?;
        }
        *slot = value;
        let config: Self = serde_json::from_value(json)?;
        config.validate()?;
        Ok(config)
    }

    pub fn models(&self) -> Models {
        Models {
            motion: self.motion,
            sensor: self.sensor,
            clutter: self.clutter.clone(),
            birth: self.birth.clone(),
        }
    }

    pub fn initial_sensor(&self) -> SensorState {
        SensorState {
            position: self.sensor_start,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |msg: &str| Err(ConfigError::Invalid(msg.to_string()));
        let dim = self.motion.state_dim();
        if self.truth_motion.state_dim() != dim {
            return fail("truth and filter motion models have different state dimensions");
        }
        for m in [&self.motion, &self.truth_motion] {
            if !(m.dt > 0.0) || !(0.0..=1.0).contains(&m.survival_probability) {
                return fail("motion model needs dt > 0 and survival probability in [0, 1]");
            }
        }
        if !self.region.is_valid() || !self.region.contains(self.sensor_start) {
            return fail("sensor must start inside a non-empty region");
        }
        if let Some(t) = self.targets.iter().find(|t| t.state.len() != dim) {
            return Err(ConfigError::Invalid(format!(
                "target state {:?} does not have dimension {dim}",
                t.state
            )));
        }
        if self.targets.iter().any(|t| t.death.is_some_and(|d| d <= t.birth)) {
            return fail("target death must come after its birth");
        }
        if !self.clutter.is_valid() || self.clutter.support.len() != self.sensor.measurement_dim() {
            return fail("clutter support must match the measurement dimension");
        }
        if !self.birth.is_valid(dim) {
            return fail("birth components must have r in [0, 1] and the filter state dimension");
        }
        let f = &self.filter;
        if f.budget.min == 0 || f.budget.min > f.budget.max || f.birth_particles == 0 {
            return fail("particle budget must satisfy 0 < min <= max and birth_particles > 0");
        }
        if !(0.0..=1.0).contains(&f.existence_threshold) || !(0.0..=1.0).contains(&f.max_existence) {
            return fail("existence threshold and ceiling must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.control.eta) {
            return fail("eta must lie in [0, 1]");
        }
        if !(self.control.grid.step >= 0.0) {
            return fail("command step must be non-negative");
        }
        if !self.ospa.is_valid() {
            return fail("OSPA needs cutoff > 0 and order >= 1");
        }
        let profile = self.sensor.profile();
        if !(profile.r0 >= 0.0 && profile.h >= 0.0) {
            return fail("detection profile needs r0 >= 0 and h >= 0");
        }
        Ok(())
    }
}

pub fn preset_json(name: &str) -> Option<&'static str> {
    match name {
        "case1" => Some(CASE1),
        "case2" => Some(CASE2),
        _ => None,
    }
}
