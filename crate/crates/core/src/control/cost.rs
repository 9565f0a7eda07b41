//! Control costs read off an updated multi-Bernoulli density.
//!
//! The error-based cost blends two normalized terms with weight `eta`:
//! the cardinality variance divided by its maximum `M/4`, and the
//! existence-weighted mean of per-track location spreads, each divided by the
//! spread an uninformative (equal-weight) cloud over the same particles would
//! have.

use serde::{Deserialize, Serialize};

use crate::rfs::BernoulliLike;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostFunction {
    /// Blend of normalized cardinality and state errors.
    Peecs,
    /// Cardinality spread about the MAP cardinality.
    MapCardVariance,
    /// The blend with `eta = 1`.
    CardVarianceOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub cardinality_error: f64,
    pub state_error: f64,
    pub total: f64,
    pub eta: f64,
}

impl CostBreakdown {
    pub fn infinite() -> Self {
        Self {
            cardinality_error: f64::INFINITY,
            state_error: f64::INFINITY,
            total: f64::INFINITY,
            eta: f64::NAN,
        }
    }
}

/// `sum_i r_i (1 - r_i)`.
pub fn cardinality_variance(existence: impl IntoIterator<Item = f64>) -> f64 {
    existence.into_iter().map(|r| r * (1.0 - r)).sum()
}

/// Cardinality variance over its maximum `M/4`; zero for an empty density.
pub fn normalized_cardinality_error(existence: impl IntoIterator<Item = f64>) -> f64 {
    let mut m = 0usize;
    let var = cardinality_variance(existence.into_iter().inspect(|_| m += 1));
    if m == 0 {
        return 0.0;
    }
    (var / (m as f64 / 4.0)).clamp(0.0, 1.0)
}

/// Normalized location spread of one track: the product of the x and y
/// weighted variances over the product of their equal-weight maxima
/// `(1/L)(1 - 1/L) sum x^2`. Zero when a maximum vanishes; clamped to `[0, 1]`
/// because that maximum is not a true supremum.
pub fn component_state_error<B: BernoulliLike + ?Sized>(component: &B) -> f64 {
    let n = component.particle_count();
    if n == 0 {
        return 0.0;
    }
    let (mut sx, mut sy, mut sxx, mut syy) = (0.0, 0.0, 0.0, 0.0);
    for (s, w) in component.weighted_states() {
        if w == 0.0 {
            continue;
        }
        let (wx, wy) = (w * s[0], w * s[1]);
        sx += wx;
        sy += wy;
        sxx += wx * s[0];
        syy += wy * s[1];
    }
    let [raw_xx, raw_yy] = component.position_square_sums();
    let var_x = (sxx - sx * sx).max(0.0);
    let var_y = (syy - sy * sy).max(0.0);
    let l = n as f64;
    let scale = (1.0 / l) * (1.0 - 1.0 / l);
    let max_x = scale * raw_xx;
    let max_y = scale * raw_yy;
    let denom = max_x * max_y;
    if !(denom > 0.0) {
        return 0.0;
    }
    (var_x * var_y / denom).clamp(0.0, 1.0)
}

/// Existence-weighted mean of [`component_state_error`]; zero if `sum r = 0`.
pub fn normalized_state_error<B: BernoulliLike>(components: &[B]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for c in components {
        let r = c.existence();
        den += r;
        if r > 0.0 {
            num += r * component_state_error(c);
        }
    }
    if den > 0.0 {
        (num / den).clamp(0.0, 1.0)
    } else {
        0.0
    }
}

/// `eta * cardinality_error + (1 - eta) * state_error`.
pub fn combine(cardinality_error: f64, state_error: f64, eta: f64) -> CostBreakdown {
    CostBreakdown {
        cardinality_error,
        state_error,
        total: eta * cardinality_error + (1.0 - eta) * state_error,
        eta,
    }
}

pub fn peecs_cost<B: BernoulliLike>(components: &[B], eta: f64) -> CostBreakdown {
    let card = normalized_cardinality_error(components.iter().map(|c| c.existence()));
    let state = if eta < 1.0 {
        normalized_state_error(components)
    } else {
        0.0
    };
    combine(card, state, eta)
}

/// Poisson-binomial pmf of the cardinality, `pmf[n] = P(|X| = n)`.
pub fn cardinality_pmf(existence: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut pmf = vec![1.0];
    for r in existence {
        pmf.push(0.0);
        for n in (1..pmf.len()).rev() {
            pmf[n] = pmf[n] * (1.0 - r) + pmf[n - 1] * r;
        }
        pmf[0] *= 1.0 - r;
    }
    pmf
}

/// `sum_n pmf(n) (n - n_map)^2`, with the smallest mode on ties.
pub fn map_cardinality_variance_cost(existence: impl IntoIterator<Item = f64>) -> f64 {
    let pmf = cardinality_pmf(existence);
    let mut n_map = 0;
    for (n, &p) in pmf.iter().enumerate() {
        if p > pmf[n_map] {
            n_map = n;
        }
    }
    pmf.iter()
        .enumerate()
        .map(|(n, p)| {
            let d = n as f64 - n_map as f64;
            p * d * d
        })
        .sum()
}

/// Evaluates the configured cost on an updated density.
pub fn evaluate_cost<B: BernoulliLike>(
    components: &[B],
    function: CostFunction,
    eta: f64,
) -> CostBreakdown {
    match function {
        CostFunction::Peecs => peecs_cost(components, eta),
        CostFunction::CardVarianceOnly => peecs_cost(components, 1.0),
        CostFunction::MapCardVariance => {
            let v = map_cardinality_variance_cost(components.iter().map(|c| c.existence()));
            combine(v, 0.0, 1.0)
        }
    }
}
