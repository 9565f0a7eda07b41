use serde::{Deserialize, Serialize};

use crate::rfs::{RandomSource, StateVector};

/// Below this turn rate the coordinated-turn matrix is replaced by its limit.
pub const TURN_RATE_EPS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MotionKind {
    /// White-acceleration constant velocity on `[x y vx vy]`.
    ConstantVelocity { accel_noise: f64 },
    /// Nearly-constant turn on `[x y vx vy omega]`.
    CoordinatedTurn { sigma_eps: f64, sigma_gamma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotionModel {
    #[serde(flatten)]
    pub kind: MotionKind,
    pub dt: f64,
    pub survival_probability: f64,
}

impl MotionModel {
    pub fn state_dim(&self) -> usize {
        match self.kind {
            MotionKind::ConstantVelocity { .. } => 4,
            MotionKind::CoordinatedTurn { .. } => 5,
        }
    }

    pub fn survival(&self, _state: &[f64]) -> f64 {
        self.survival_probability
    }

    /// Draws a successor state from the transition density.
    pub fn propagate(&self, state: &[f64], rng: &mut RandomSource) -> StateVector {
        match self.kind {
            MotionKind::ConstantVelocity { accel_noise } => {
                propagate_cv(state, self.dt, accel_noise, rng)
            }
            MotionKind::CoordinatedTurn {
                sigma_eps,
                sigma_gamma,
            } => propagate_ct(state, self.dt, sigma_eps, sigma_gamma, rng),
        }
    }
}

fn add_accel_noise(s: &mut [f64], dt: f64, sigma: f64, rng: &mut RandomSource) {
    if sigma == 0.0 {
        return;
    }
    let ax = sigma * rng.standard_normal();
    let ay = sigma * rng.standard_normal();
    let half_t2 = 0.5 * dt * dt;
    s[0] += half_t2 * ax;
    s[1] += half_t2 * ay;
    s[2] += dt * ax;
    s[3] += dt * ay;
}

pub fn propagate_cv(state: &[f64], dt: f64, noise: f64, rng: &mut RandomSource) -> StateVector {
    let mut s = StateVector::from_slice(state);
    s[0] += dt * state[2];
    s[1] += dt * state[3];
    add_accel_noise(&mut s, dt, noise, rng);
    s
}

/// Noise-free coordinated-turn step of `[x y vx vy]` at turn rate `omega`.
///
/// The top-right entry uses `(1 - cos wT) / w`; printed variants with a
/// `sin wT` denominator are a typo (they break the `w -> 0` limit).
pub fn coordinated_turn(kinematic: [f64; 4], omega: f64, dt: f64) -> [f64; 4] {
    if omega.abs() < TURN_RATE_EPS {
        let [x, y, vx, vy] = kinematic;
        return [x + dt * vx, y + dt * vy, vx, vy];
    }
    turn_step(kinematic, omega, dt)
}

fn turn_step(kinematic: [f64; 4], omega: f64, dt: f64) -> [f64; 4] {
    let [x, y, vx, vy] = kinematic;
    let wt = omega * dt;
    let (sin, cos) = wt.sin_cos();
    let half = 0.5 * wt;
    // 1 - cos(wT) without cancellation.
    let one_minus_cos = 2.0 * half.sin() * half.sin();
    let a = sin / omega;
    let b = one_minus_cos / omega;
    [
        x + a * vx - b * vy,
        y + b * vx + a * vy,
        cos * vx - sin * vy,
        sin * vx + cos * vy,
    ]
}

pub fn propagate_ct(
    state: &[f64],
    dt: f64,
    sigma_eps: f64,
    sigma_gamma: f64,
    rng: &mut RandomSource,
) -> StateVector {
    let omega = state[4];
    let k = coordinated_turn([state[0], state[1], state[2], state[3]], omega, dt);
    let mut s: StateVector = StateVector::from_slice(&[k[0], k[1], k[2], k[3], omega]);
    add_accel_noise(&mut s, dt, sigma_eps, rng);
    if sigma_gamma != 0.0 {
        s[4] += dt * sigma_gamma * rng.standard_normal();
    }
    s
}
