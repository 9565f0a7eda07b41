//! Particle multi-Bernoulli multi-target tracking with myopic sensor control.
//!
//! - [`rfs`]: particles, Bernoulli components, resampling, seeded randomness.
//! - [`models`]: motion, sensor, detection, clutter and birth models.
//! - [`cbmember`]: the filter recursion (predict, update, track management).
//! - [`control`]: command sets, control costs and command selection.
//! - [`metrics`]: OSPA and the assignment solver behind it.
//! - [`harness`]: scenarios, ground truth, closed-loop runs and Monte-Carlo.

pub mod cbmember;
pub mod control;
pub mod harness;
pub mod metrics;
pub mod models;
pub mod rfs;
