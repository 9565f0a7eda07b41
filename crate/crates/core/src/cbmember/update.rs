use super::predict::PredictedDensity;
use super::{FilterError, MIN_MISS_DENOMINATOR};
use crate::models::{position, ClutterModel, Geometry, Measurement, SensorModel, SensorState};
use crate::rfs::{
    BernoulliComponent, BernoulliLike, MultiBernoulliDensity, Particle, MIN_WEIGHT_TOTAL,
};

/// Existence probability plus normalized weights over a fixed particle support.
#[derive(Debug, Clone, PartialEq)]
pub struct PooledComponent {
    pub r: f64,
    pub weights: Vec<f64>,
}

/// Updated density: one legacy track per predicted track, then one
/// measurement-corrected track per measurement.
///
/// Legacy weights index the particles of their own predicted track; corrected
/// weights index the concatenation of all predicted particles.
#[derive(Debug, Clone)]
pub struct UpdatedDensity<'a> {
    pool: &'a [BernoulliComponent],
    legacy: Vec<PooledComponent>,
    corrected: Vec<PooledComponent>,
    /// Per-track and whole-pool `[sum x^2, sum y^2]`.
    track_squares: Vec<[f64; 2]>,
    pool_squares: [f64; 2],
    /// How many legacy denominators hit [`MIN_MISS_DENOMINATOR`].
    pub clamped: usize,
}

/// Borrowed view of one updated track.
#[derive(Debug, Clone, Copy)]
pub struct ComponentView<'a> {
    pub r: f64,
    pub weights: &'a [f64],
    support: &'a [BernoulliComponent],
    square_sums: [f64; 2],
}

impl BernoulliLike for ComponentView<'_> {
    fn existence(&self) -> f64 {
        self.r
    }

    fn particle_count(&self) -> usize {
        self.weights.len()
    }

    fn weighted_states(&self) -> impl Iterator<Item = (&[f64], f64)> + Clone + '_ {
        self.support
            .iter()
            .flat_map(|c| c.particles.iter())
            .zip(self.weights.iter())
            .map(|(p, &w)| (p.state.as_slice(), w))
    }

    fn position_square_sums(&self) -> [f64; 2] {
        self.square_sums
    }
}

impl<'a> UpdatedDensity<'a> {
    pub fn len(&self) -> usize {
        self.legacy.len() + self.corrected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn legacy(&self) -> &[PooledComponent] {
        &self.legacy
    }

    pub fn corrected(&self) -> &[PooledComponent] {
        &self.corrected
    }

    pub fn existence(&self) -> impl Iterator<Item = f64> + '_ {
        self.legacy.iter().chain(&self.corrected).map(|c| c.r)
    }

    pub fn views(&self) -> Vec<ComponentView<'_>> {
        let legacy = self.legacy.iter().enumerate().map(|(i, c)| ComponentView {
            r: c.r,
            weights: &c.weights,
            support: &self.pool[i..i + 1],
            square_sums: self.track_squares[i],
        });
        let corrected = self.corrected.iter().map(|c| ComponentView {
            r: c.r,
            weights: &c.weights,
            support: self.pool,
            square_sums: self.pool_squares,
        });
        legacy.chain(corrected).collect()
    }

    /// Copies every view into an owned density (zero-weight particles kept).
    pub fn to_density(&self) -> MultiBernoulliDensity {
        let components = self
            .views()
            .iter()
            .map(|v| {
                let particles = v
                    .weighted_states()
                    .map(|(s, w)| Particle::new(s, w))
                    .collect();
                BernoulliComponent::new(v.r, particles)
            })
            .collect();
        MultiBernoulliDensity::new(components)
    }
}

/// Measurement update of a predicted density against the scan `measurements`
/// taken from `sensor`. Detection probabilities are evaluated per particle at
/// that sensor state.
pub fn update<'a>(
    predicted: &'a PredictedDensity,
    measurements: &[Measurement],
    sensor: &SensorState,
    model: &SensorModel,
    clutter: &ClutterModel,
) -> Result<UpdatedDensity<'a>, FilterError> {
    let pool = predicted.components.as_slice();
    if pool.is_empty() {
        return Ok(UpdatedDensity {
            pool,
            legacy: Vec::new(),
            corrected: Vec::new(),
            track_squares: Vec::new(),
            pool_squares: [0.0, 0.0],
            clamped: 0,
        });
    }

    let geometry: Vec<Geometry> = pool
        .iter()
        .flat_map(|c| c.particles.iter())
        .map(|p| model.geometry(sensor, position(&p.state)))
        .collect();

    let mut legacy = Vec::with_capacity(pool.len());
    // 1 - r * rho_L per track, after the floor.
    let mut miss = Vec::with_capacity(pool.len());
    let mut clamped = 0;
    let mut offset = 0;
    for track in pool {
        let geo = &geometry[offset..offset + track.particles.len()];
        offset += track.particles.len();

        let mut rho_l = 0.0;
        let mut weights: Vec<f64> = track
            .particles
            .iter()
            .zip(geo)
            .map(|(p, g)| {
                rho_l += p.weight * g.detection;
                p.weight * (1.0 - g.detection)
            })
            .collect();
        let mut denom = 1.0 - track.r * rho_l;
        if denom < MIN_MISS_DENOMINATOR {
            denom = MIN_MISS_DENOMINATOR;
            clamped += 1;
        }
        miss.push(denom);
        let r = (track.r * (1.0 - rho_l) / denom).clamp(0.0, 1.0);
        let total: f64 = weights.iter().sum();
        if total > MIN_WEIGHT_TOTAL {
            weights.iter_mut().for_each(|w| *w /= total);
            legacy.push(PooledComponent { r, weights });
        } else {
            // Certain detection everywhere: the legacy track is empty.
            let weights = track.particles.iter().map(|p| p.weight).collect();
            legacy.push(PooledComponent { r: 0.0, weights });
        }
    }

    // Per-track odds r / (1 - r) scaling each track's particles in the pool.
    let odds: Vec<f64> = pool
        .iter()
        .map(|c| c.r / (1.0 - c.r).max(MIN_MISS_DENOMINATOR))
        .collect();

    let pool_len = geometry.len();
    // Per particle: w * p_D and the likelihood constants.
    let mut terms = Vec::with_capacity(if measurements.is_empty() { 0 } else { pool_len });
    if !measurements.is_empty() {
        let particles = pool.iter().flat_map(|c| c.particles.iter());
        for (p, g) in particles.zip(&geometry) {
            terms.push((p.weight * g.detection, model.gaussian_terms(g)?));
        }
    }

    let mut corrected = Vec::with_capacity(measurements.len());
    for (zi, z) in measurements.iter().enumerate() {
        let zp = model.prepare(z);
        let mut weights = Vec::with_capacity(pool_len);
        let mut numerator = 0.0;
        let mut denominator = clutter.intensity(z);
        let mut offset = 0;
        for (i, track) in pool.iter().enumerate() {
            let span = &terms[offset..offset + track.particles.len()];
            offset += track.particles.len();
            let mut rho_u = 0.0;
            for (wd, t) in span {
                let v = if *wd > 0.0 {
                    let lik = model.eval_terms(&zp, t);
                    if !lik.is_finite() {
                        return Err(FilterError::NonFiniteLikelihood { measurement: zi });
                    }
                    wd * lik
                } else {
                    0.0
                };
                rho_u += v;
                weights.push(v * odds[i]);
            }
            let r = track.r;
            numerator += r * (1.0 - r) * rho_u / (miss[i] * miss[i]);
            denominator += r * rho_u / miss[i];
        }
        let r_u = if denominator > 0.0 {
            (numerator / denominator).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let total: f64 = weights.iter().sum();
        if total > MIN_WEIGHT_TOTAL && total.is_finite() {
            weights.iter_mut().for_each(|w| *w /= total);
            corrected.push(PooledComponent { r: r_u, weights });
        } else {
            let w = 1.0 / pool_len as f64;
            corrected.push(PooledComponent {
                r: 0.0,
                weights: vec![w; pool_len],
            });
        }
    }

    let track_squares: Vec<[f64; 2]> = pool.iter().map(|c| c.position_square_sums()).collect();
    let pool_squares = track_squares
        .iter()
        .fold([0.0, 0.0], |a, t| [a[0] + t[0], a[1] + t[1]]);
    Ok(UpdatedDensity {
        pool,
        legacy,
        corrected,
        track_squares,
        pool_squares,
        clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{DetectionProfile, RangeSensorModel};
    use smallvec::smallvec;

    fn model(r0: f64, h: f64) -> SensorModel {
        SensorModel::Range(RangeSensorModel {
            sigma0: 1.0,
            beta: 0.0,
            profile: DetectionProfile { r0, h },
        })
    }

    fn clutter(rate: f64) -> ClutterModel {
        ClutterModel {
            rate,
            support: vec![[0.0, 100.0]],
        }
    }

    fn predicted(r: f64, xs: &[f64]) -> PredictedDensity {
        let w = 1.0 / xs.len() as f64;
        let particles = xs
            .iter()
            .map(|&x| Particle::new(smallvec![x, 0.0, 0.0, 0.0], w))
            .collect();
        PredictedDensity::from_density(MultiBernoulliDensity::new(vec![BernoulliComponent::new(
            r, particles,
        )]))
    }

    #[test]
    fn no_detection_leaves_existence() {
        // h = 1 with r0 = 0: p_D is zero away from the sensor.
        let pd_zero = model(0.0, 1.0);
        let pred = predicted(0.6, &[10.0, 20.0]);
        let s = SensorState::new(0.0, 0.0);
        let z: Vec<Measurement> = vec![smallvec![10.0]];
        let up = update(&pred, &z, &s, &pd_zero, &clutter(1.0)).unwrap();
        assert_eq!(up.len(), 2);
        assert_eq!(up.legacy()[0].r, 0.6);
        assert_eq!(up.corrected()[0].r, 0.0);

        let empty = update(&pred, &[], &s, &pd_zero, &clutter(0.0)).unwrap();
        let card: f64 = empty.existence().sum();
        assert_eq!(card, pred.expected_cardinality());
    }

    #[test]
    fn certain_detection_without_measurement_kills_legacy() {
        let pred = predicted(0.7, &[10.0]);
        let s = SensorState::new(0.0, 0.0);
        let up = update(&pred, &[], &s, &model(1e6, 0.0), &clutter(0.0)).unwrap();
        assert_eq!(up.len(), 1);
        assert_eq!(up.legacy()[0].r, 0.0);
    }

    #[test]
    fn empty_prediction_gives_empty_update() {
        let pred = PredictedDensity::default();
        let z: Vec<Measurement> = vec![smallvec![1.0]];
        let up = update(&pred, &z, &SensorState::new(0.0, 0.0), &model(1.0, 0.0), &clutter(1.0)).unwrap();
        assert!(up.is_empty());
    }

    #[test]
    fn materialized_density_matches_views() {
        let pred = predicted(0.5, &[10.0, 12.0, 14.0]);
        let z: Vec<Measurement> = vec![smallvec![12.0], smallvec![50.0]];
        let up = update(&pred, &z, &SensorState::new(0.0, 0.0), &model(1e6, 0.0), &clutter(0.5)).unwrap();
        let d = up.to_density();
        assert_eq!(d.len(), 3);
        for (c, v) in d.components.iter().zip(up.views()) {
            assert_eq!(c.r, v.r);
            assert_eq!(c.particles.len(), v.particle_count());
        }
    }
}
