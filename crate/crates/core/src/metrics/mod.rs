//! OSPA miss distance between finite point sets.

mod assignment;

use serde::{Deserialize, Serialize};

pub use assignment::{assignment_cost, assignment_min_cost};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum MetricsError {
    #[error("cost matrix has {rows} rows but a row of length {cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("cost matrix has a non-finite entry")]
    NonFinite,
    #[error("points of dimension {left} and {right} cannot be compared")]
    DimensionMismatch { left: usize, right: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OspaParams {
    /// Cutoff `c` in meters.
    pub cutoff: f64,
    /// Order `p >= 1`.
    pub order: f64,
}

impl Default for OspaParams {
    fn default() -> Self {
        Self {
            cutoff: 100.0,
            order: 1.0,
        }
    }
}

impl OspaParams {
    pub fn is_valid(&self) -> bool {
        self.cutoff > 0.0 && self.order >= 1.0
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct OspaResult {
    pub total: f64,
    pub localization: f64,
    pub cardinality: f64,
}

fn dim_check<P: AsRef<[f64]>>(a: &[P], b: &[P]) -> Result<(), MetricsError> {
    let mut dims = a.iter().chain(b).map(|p| p.as_ref().len());
    if let Some(first) = dims.next() {
        if let Some(other) = dims.find(|&d| d != first) {
            return Err(MetricsError::DimensionMismatch {
                left: first,
                right: other,
            });
        }
    }
    Ok(())
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// OSPA distance of order `p` with cutoff `c`, split so that
/// `total^p = localization^p + cardinality^p`.
pub fn ospa<P: AsRef<[f64]>>(
    truth: &[P],
    estimate: &[P],
    params: &OspaParams,
) -> Result<OspaResult, MetricsError> {
    dim_check(truth, estimate)?;
    let (small, large) = if truth.len() <= estimate.len() {
        (truth, estimate)
    } else {
        (estimate, truth)
    };
    let (m, n) = (small.len(), large.len());
    if n == 0 {
        return Ok(OspaResult::default());
    }
    let (c, p) = (params.cutoff, params.order);

    // Pad the small set with dummy rows costing c^p, so the square problem
    // charges exactly the cardinality penalty for unmatched points.
    let cp = c.powf(p);
    let matrix: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i < m {
                        euclid(small[i].as_ref(), large[j].as_ref()).min(c).powf(p)
                    } else {
                        cp
                    }
                })
                .collect()
        })
        .collect();
    let perm = assignment_min_cost(&matrix)?;
    // Summed in sorted order so swapping equal-size arguments is exact.
    let mut matched: Vec<f64> = (0..m).map(|i| matrix[i][perm[i]]).collect();
    matched.sort_by(f64::total_cmp);
    let loc_sum = matched.iter().fold(0.0, |a, b| a + b);
    let card_sum = cp * (n - m) as f64;
    let nf = n as f64;
    let root = |x: f64| (x / nf).powf(1.0 / p);
    Ok(OspaResult {
        total: root(loc_sum + card_sum).min(c),
        localization: root(loc_sum),
        cardinality: root(card_sum),
    })
}
