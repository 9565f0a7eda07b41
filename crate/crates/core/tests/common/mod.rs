//! Shared helpers: a straight re-derivation of the multi-Bernoulli update
//! used as an oracle for the particle implementation.
#![allow(dead_code)]

use std::f64::consts::PI;

use mbsc::cbmember::{update, PredictedDensity};
use mbsc::models::{
    BearingRangeSensorModel, ClutterModel, DetectionProfile, RangeSensorModel, SensorModel,
    SensorState,
};
use mbsc::rfs::{BernoulliComponent, MultiBernoulliDensity, Particle, RandomSource};
use smallvec::smallvec;

pub const TOL: f64 = 1e-12;

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL * b.abs().max(1.0)
}

pub struct Instance {
    pub sensor: [f64; 2],
    pub model: SensorModel,
    pub clutter: ClutterModel,
    /// `(r, [(x, y, w)])` per track, weights normalized.
    pub tracks: Vec<(f64, Vec<(f64, f64, f64)>)>,
    pub scan: Vec<Vec<f64>>,
}

pub struct Expected {
    pub legacy: Vec<(f64, Vec<f64>)>,
    pub corrected: Vec<(f64, Vec<f64>)>,
}

pub fn pd(profile: &DetectionProfile, d: f64) -> f64 {
    if d <= profile.r0 {
        1.0
    } else {
        (1.0 - profile.h * (d - profile.r0)).max(0.0)
    }
}

pub fn normal(x: f64, sigma: f64) -> f64 {
    (-(x * x) / (2.0 * sigma * sigma)).exp() / (sigma * (2.0 * PI).sqrt())
}

pub fn wrap(mut a: f64) -> f64 {
    while a > PI {
        a -= 2.0 * PI;
    }
    while a <= -PI {
        a += 2.0 * PI;
    }
    a
}

pub fn detection_and_likelihood(inst: &Instance, x: f64, y: f64, z: Option<&[f64]>) -> (f64, f64) {
    let dx = x - inst.sensor[0];
    let dy = y - inst.sensor[1];
    let d = (dx * dx + dy * dy).sqrt();
    match &inst.model {
        SensorModel::Range(m) => {
            let g = z.map_or(0.0, |z| normal(z[0] - d, m.sigma0 + m.beta * d * d));
            (pd(&m.profile, d), g)
        }
        SensorModel::BearingRange(m) => {
            let g = z.map_or(0.0, |z| {
                normal(wrap(z[0] - dx.atan2(dy)), m.sigma_theta) * normal(z[1] - d, m.sigma_r)
            });
            (pd(&m.profile, d), g)
        }
    }
}

pub fn clutter_intensity(c: &ClutterModel, z: &[f64]) -> f64 {
    let inside = z.iter().zip(&c.support).all(|(v, [lo, hi])| v >= lo && v <= hi);
    if !inside || c.rate == 0.0 {
        return 0.0;
    }
    let vol: f64 = c.support.iter().map(|[lo, hi]| hi - lo).product();
    c.rate / vol
}

/// Straight evaluation of the legacy and corrected tracks.
pub fn oracle(inst: &Instance) -> Expected {
    let mut legacy = Vec::new();
    for (r, ps) in &inst.tracks {
        let mut rho_l = 0.0;
        for &(x, y, w) in ps {
            rho_l += w * detection_and_likelihood(inst, x, y, None).0;
        }
        let r_l = r * (1.0 - rho_l) / (1.0 - r * rho_l);
        let raw: Vec<f64> = ps
            .iter()
            .map(|&(x, y, w)| w * (1.0 - detection_and_likelihood(inst, x, y, None).0))
            .collect();
        let s: f64 = raw.iter().sum();
        if s == 0.0 {
            // Detection is certain everywhere: an empty track on the prior weights.
            legacy.push((0.0, ps.iter().map(|p| p.2).collect()));
        } else {
            legacy.push((r_l, raw.iter().map(|v| v / s).collect()));
        }
    }

    let mut corrected = Vec::new();
    for z in &inst.scan {
        let mut num = 0.0;
        let mut den = clutter_intensity(&inst.clutter, z);
        let mut raw = Vec::new();
        for (r, ps) in &inst.tracks {
            let mut rho_l = 0.0;
            let mut rho_u = 0.0;
            for &(x, y, w) in ps {
                let (p, g) = detection_and_likelihood(inst, x, y, Some(z));
                rho_l += w * p;
                rho_u += w * p * g;
                raw.push(r / (1.0 - r) * w * p * g);
            }
            let miss = 1.0 - r * rho_l;
            num += r * (1.0 - r) * rho_u / (miss * miss);
            den += r * rho_u / miss;
        }
        let s: f64 = raw.iter().sum();
        corrected.push((num / den, raw.iter().map(|v| v / s).collect()));
    }
    Expected { legacy, corrected }
}

pub fn predicted(inst: &Instance) -> PredictedDensity {
    let components = inst
        .tracks
        .iter()
        .map(|(r, ps)| {
            let particles = ps
                .iter()
                .map(|&(x, y, w)| Particle::new(smallvec![x, y, 0.0, 0.0], w))
                .collect();
            BernoulliComponent::new(*r, particles)
        })
        .collect();
    PredictedDensity::from_density(MultiBernoulliDensity::new(components))
}

pub fn random_instance(rng: &mut RandomSource, bearing: bool, with_clutter: bool) -> Instance {
    let sensor = [rng.uniform_in(-50.0, 50.0), rng.uniform_in(-50.0, 50.0)];
    let profile = DetectionProfile {
        r0: rng.uniform_in(50.0, 200.0),
        h: rng.uniform_in(0.0, 0.004),
    };
    let (model, support) = if bearing {
        (
            SensorModel::BearingRange(BearingRangeSensorModel {
                sigma_theta: rng.uniform_in(0.02, 0.2),
                sigma_r: rng.uniform_in(2.0, 10.0),
                profile,
            }),
            vec![[-PI, PI], [0.0, 600.0]],
        )
    } else {
        (
            SensorModel::Range(RangeSensorModel {
                sigma0: rng.uniform_in(1.0, 5.0),
                beta: rng.uniform_in(0.0, 1e-4),
                profile,
            }),
            vec![[0.0, 600.0]],
        )
    };
    let clutter = ClutterModel {
        rate: if with_clutter { rng.uniform_in(0.1, 5.0) } else { 0.0 },
        support,
    };

    let n_tracks = 1 + (rng.uniform() * 2.0) as usize;
    let mut tracks = Vec::new();
    for _ in 0..n_tracks {
        let r = rng.uniform_in(0.05, 0.95);
        let cx = rng.uniform_in(100.0, 250.0);
        let cy = rng.uniform_in(100.0, 250.0);
        let n = 1 + (rng.uniform() * 5.0) as usize;
        let raw: Vec<f64> = (0..n).map(|_| rng.uniform_in(0.1, 1.0)).collect();
        let s: f64 = raw.iter().sum();
        let ps: Vec<(f64, f64, f64)> = raw
            .iter()
            .map(|w| (cx + 15.0 * rng.standard_normal(), cy + 15.0 * rng.standard_normal(), w / s))
            .collect();
        tracks.push((r, ps));
    }

    // Measurements near a random particle's ideal measurement.
    let n_meas = (rng.uniform() * 3.0) as usize;
    let mut scan = Vec::new();
    for _ in 0..n_meas {
        let (_, ps) = &tracks[(rng.uniform() * tracks.len() as f64) as usize];
        let (x, y, _) = ps[(rng.uniform() * ps.len() as f64) as usize];
        let dx = x - sensor[0];
        let dy = y - sensor[1];
        let d = (dx * dx + dy * dy).sqrt();
        let z = if bearing {
            vec![dx.atan2(dy) + 0.05 * rng.standard_normal(), d + 3.0 * rng.standard_normal()]
        } else {
            vec![d + 3.0 * rng.standard_normal()]
        };
        scan.push(z);
    }

    Instance {
        sensor,
        model,
        clutter,
        tracks,
        scan,
    }
}

/// Compares `update` with [`oracle`]; `Err` describes the first mismatch.
pub fn check(inst: &Instance) -> Result<(), String> {
    let pred = predicted(inst);
    let scan: Vec<mbsc::models::Measurement> = inst.scan.iter().map(|z| z.iter().copied().collect()).collect();
    let sensor = SensorState::new(inst.sensor[0], inst.sensor[1]);
    let up = update(&pred, &scan, &sensor, &inst.model, &inst.clutter).map_err(|e| e.to_string())?;
    let want = oracle(inst);

    if up.legacy().len() != want.legacy.len() || up.corrected().len() != want.corrected.len() {
        return Err("component counts differ".into());
    }
    for (got, (r, w)) in up.legacy().iter().zip(&want.legacy) {
        if !close(got.r, *r) {
            return Err(format!("legacy r {} vs {}", got.r, r));
        }
        if got.weights.len() != w.len() {
            return Err("weight counts differ".into());
        }
        for (a, b) in got.weights.iter().zip(w) {
            if !close(*a, *b) {
                return Err(format!("legacy weight {a} vs {b}"));
            }
        }
    }
    for (got, (r, w)) in up.corrected().iter().zip(&want.corrected) {
        if !close(got.r, *r) {
            return Err(format!("corrected r {} vs {}", got.r, r));
        }
        if got.weights.len() != w.len() {
            return Err("weight counts differ".into());
        }
        for (a, b) in got.weights.iter().zip(w) {
            if !close(*a, *b) {
                return Err(format!("corrected weight {a} vs {b}"));
            }
        }
    }
    Ok(())
}
