use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::random::RandomSource;
use super::RfsError;

/// Single-target state vector. Four entries `[x y vx vy]` for constant-velocity
/// states, five `[x y vx vy omega]` for turn-model states.
pub type StateVector = SmallVec<[f64; 5]>;

/// Totals at or below this are treated as all-zero weights.
pub const MIN_WEIGHT_TOTAL: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Particle {
    pub state: StateVector,
    pub weight: f64,
}

impl Particle {
    pub fn new(state: impl Into<StateVector>, weight: f64) -> Self {
        Self {
            state: state.into(),
            weight,
        }
    }
}

/// One Bernoulli track: existence probability plus a weighted particle cloud.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BernoulliComponent {
    pub r: f64,
    pub particles: Vec<Particle>,
}

impl BernoulliComponent {
    pub fn new(r: f64, particles: Vec<Particle>) -> Self {
        debug_assert!((0.0..=1.0).contains(&r), "existence probability {r} out of range");
        Self { r, particles }
    }

    /// Builds a component from equally weighted states.
    pub fn from_states(r: f64, states: impl IntoIterator<Item = StateVector>) -> Self {
        let mut particles: Vec<Particle> =
            states.into_iter().map(|s| Particle::new(s, 1.0)).collect();
        let w = 1.0 / particles.len().max(1) as f64;
        particles.iter_mut().for_each(|p| p.weight = w);
        Self::new(r, particles)
    }

    pub fn mean(&self) -> StateVector {
        weighted_mean(&self.particles)
    }
}

/// The multi-target belief: an ordered list of independent Bernoulli tracks.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MultiBernoulliDensity {
    pub components: Vec<BernoulliComponent>,
}

impl MultiBernoulliDensity {
    pub fn new(components: Vec<BernoulliComponent>) -> Self {
        Self { components }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Mean cardinality, the sum of existence probabilities.
    pub fn expected_cardinality(&self) -> f64 {
        self.components.iter().map(|c| c.r).sum()
    }

    pub fn total_particles(&self) -> usize {
        self.components.iter().map(|c| c.particles.len()).sum()
    }
}

/// Read access shared by owned components and the borrowed views produced by
/// the filter update.
pub trait BernoulliLike {
    fn existence(&self) -> f64;

    fn particle_count(&self) -> usize;

    /// `(state, weight)` pairs in a fixed order.
    fn weighted_states(&self) -> impl Iterator<Item = (&[f64], f64)> + Clone + '_;

    /// `[sum x^2, sum y^2]` over every particle, whatever its weight.
    fn position_square_sums(&self) -> [f64; 2] {
        self.weighted_states().fold([0.0, 0.0], |[sx, sy], (s, _)| {
            [sx + s[0] * s[0], sy + s[1] * s[1]]
        })
    }

    fn eap_mean(&self) -> StateVector {
        let mut acc = StateVector::new();
        for (state, w) in self.weighted_states() {
            if acc.is_empty() {
                acc.resize(state.len(), 0.0);
            }
            for (a, s) in acc.iter_mut().zip(state) {
                *a += w * s;
            }
        }
        acc
    }
}

impl BernoulliLike for BernoulliComponent {
    fn existence(&self) -> f64 {
        self.r
    }

    fn particle_count(&self) -> usize {
        self.particles.len()
    }

    fn weighted_states(&self) -> impl Iterator<Item = (&[f64], f64)> + Clone + '_ {
        self.particles.iter().map(|p| (p.state.as_slice(), p.weight))
    }
}

/// Rescales weights in place so they sum to one. Returns the pre-normalization total.
pub fn normalize_weights(particles: &mut [Particle]) -> Result<f64, RfsError> {
    let total: f64 = particles.iter().map(|p| p.weight).sum();
    if !(total > MIN_WEIGHT_TOTAL) || !total.is_finite() {
        return Err(RfsError::AllWeightsZero);
    }
    for p in particles.iter_mut() {
        p.weight /= total;
    }
    Ok(total)
}

/// Normalizes a bare weight vector, same contract as [`normalize_weights`].
pub fn normalize_slice(weights: &mut [f64]) -> Result<f64, RfsError> {
    let total: f64 = weights.iter().sum();
    if !(total > MIN_WEIGHT_TOTAL) || !total.is_finite() {
        return Err(RfsError::AllWeightsZero);
    }
    weights.iter_mut().for_each(|w| *w /= total);
    Ok(total)
}

/// Weighted componentwise mean of the particle states.
pub fn weighted_mean(particles: &[Particle]) -> StateVector {
    let Some(first) = particles.first() else {
        return StateVector::new();
    };
    let mut acc: StateVector = SmallVec::from_elem(0.0, first.state.len());
    for p in particles {
        for (a, s) in acc.iter_mut().zip(&p.state) {
            *a += p.weight * s;
        }
    }
    acc
}

/// Systematic resampling of `component` to exactly `target_count` equally
/// weighted particles. The existence probability is carried over untouched.
pub fn resample(
    component: &BernoulliComponent,
    target_count: usize,
    rng: &mut RandomSource,
) -> Result<BernoulliComponent, RfsError> {
    let particles = systematic_resample(component.weighted_states(), target_count, rng)?;
    Ok(BernoulliComponent {
        r: component.r,
        particles,
    })
}

/// Systematic resampling over any weighted state sequence (weights need not be
/// normalized). The iterator is walked twice.
pub fn systematic_resample<'a, I>(
    states: I,
    target_count: usize,
    rng: &mut RandomSource,
) -> Result<Vec<Particle>, RfsError>
where
    I: Iterator<Item = (&'a [f64], f64)> + Clone,
{
    assert!(target_count > 0, "target_count must be positive");
    let total: f64 = states.clone().map(|(_, w)| w).sum();
    if !(total > MIN_WEIGHT_TOTAL) || !total.is_finite() {
        return Err(RfsError::AllWeightsZero);
    }
    let step = total / target_count as f64;
    let mut next = rng.uniform() * step;
    let w_out = 1.0 / target_count as f64;
    let mut out = Vec::with_capacity(target_count);
    let mut cumulative = 0.0;
    let mut last: Option<&'a [f64]> = None;
    for (state, w) in states {
        cumulative += w;
        if w > 0.0 {
            last = Some(state);
        }
        while out.len() < target_count && next < cumulative {
            out.push(Particle::new(StateVector::from_slice(state), w_out));
            next += step;
        }
        if out.len() == target_count {
            break;
        }
    }
    // Floating-point shortfall at the tail of the cumulative sum.
    let last = last.expect("positive total implies a positive weight");
    while out.len() < target_count {
        out.push(Particle::new(StateVector::from_slice(last), w_out));
    }
    Ok(out)
}

/// Bounds on the per-component particle count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParticleBudget {
    pub per_expected_target: usize,
    pub min: usize,
    pub max: usize,
}

impl Default for ParticleBudget {
    fn default() -> Self {
        Self {
            per_expected_target: 500,
            min: 100,
            max: 1000,
        }
    }
}

impl ParticleBudget {
    /// `per_expected_target * max(1, round(r))`, clamped to `[min, max]`.
    pub fn for_existence(&self, r: f64) -> usize {
        let multiplier = r.round().max(1.0) as usize;
        (self.per_expected_target * multiplier).clamp(self.min, self.max)
    }
}
