use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::models::SensorState;

/// Axis-aligned surveillance region the sensor is confined to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Region {
    pub x: [f64; 2],
    pub y: [f64; 2],
}

impl Region {
    pub fn clamp(&self, p: [f64; 2]) -> [f64; 2] {
        [p[0].clamp(self.x[0], self.x[1]), p[1].clamp(self.y[0], self.y[1])]
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        (self.x[0]..=self.x[1]).contains(&p[0]) && (self.y[0]..=self.y[1]).contains(&p[1])
    }

    pub fn is_valid(&self) -> bool {
        self.x[1] > self.x[0] && self.y[1] > self.y[0]
    }
}

/// A candidate next sensor state. Id 0 is always "stay".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlCommand {
    pub id: usize,
    pub target: SensorState,
}

impl ControlCommand {
    pub fn is_stay(&self) -> bool {
        self.id == 0
    }
}

/// Radial command grid: `rings` step lengths (`step`, `2*step`, ...) in
/// `headings` equally spaced directions, plus stay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CommandGrid {
    pub headings: usize,
    pub rings: usize,
    pub step: f64,
}

impl Default for CommandGrid {
    fn default() -> Self {
        Self {
            headings: 8,
            rings: 2,
            step: 50.0,
        }
    }
}

impl CommandGrid {
    pub fn len(&self) -> usize {
        1 + self.headings * self.rings
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Ids run `1 + (ring - 1) * headings + heading`; heading 0 points along +x.
pub fn admissible_commands(
    current: &SensorState,
    grid: &CommandGrid,
    region: &Region,
) -> Vec<ControlCommand> {
    let mut out = Vec::with_capacity(grid.len());
    out.push(ControlCommand {
        id: 0,
        target: SensorState {
            position: region.clamp(current.position),
        },
    });
    for ring in 1..=grid.rings {
        let dist = grid.step * ring as f64;
        for h in 0..grid.headings {
            let angle = TAU * h as f64 / grid.headings as f64;
            let (sin, cos) = angle.sin_cos();
            let p = [current.x() + dist * cos, current.y() + dist * sin];
            out.push(ControlCommand {
                id: out.len(),
                target: SensorState {
                    position: region.clamp(p),
                },
            });
        }
    }
    out
}
