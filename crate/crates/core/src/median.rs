//! Median values over weighted finite sets.
//!
//! The median of `u` on `A` is the largest threshold `a` such that the
//! measure of `{u < a}` is at most half the measure of `A`. On a finite
//! sample that threshold is always one of the attained values.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::space::{MetricMeasureSpace, SubsetMask};

/// Relative slack when comparing a cumulative weight against half the total.
///
/// Cumulative sums of grid weights like `h^n` are not exact in floating point;
/// without the slack, `{0, 0, 1, 1}` with weights `1/3` could miss its exact
/// half-mass threshold.
const HALF_MASS_SLACK: f64 = 1e-12;

/// Values with matching positive weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedSample {
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
}

impl WeightedSample {
    pub fn new(values: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if values.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: values.len(),
                got: weights.len(),
            });
        }
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(invalid("sample weights must be positive and finite"));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(invalid("sample contains NaN"));
        }
        Ok(Self { values, weights })
    }

    /// Unit weights.
    pub fn counting(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        Self::new(values, vec![1.0; n])
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn median(&self) -> f64 {
        median_of(&self.values, &self.weights)
    }
}

pub fn median(sample: &WeightedSample) -> f64 {
    sample.median()
}

/// Median of parallel value/weight slices. Both must be nonempty and of
/// equal length.
pub(crate) fn median_of(values: &[f64], weights: &[f64]) -> f64 {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let total: f64 = weights.iter().sum();
    let mut below = 0.0;
    let mut best = values[order[0]];
    let mut i = 0;
    while i < order.len() {
        let v = values[order[i]];
        // `below` is the weight strictly less than v
        if 2.0 * below <= total * (1.0 + HALF_MASS_SLACK) {
            best = v;
        } else {
            break;
        }
        while i < order.len() && values[order[i]] == v {
            below += weights[order[i]];
            i += 1;
        }
    }
    best
}

/// Median of `u` over `B(x, r)`, or over `B(x, r) ∩ S` when a mask is given.
pub fn median_on_ball(
    u: &[f64],
    space: &MetricMeasureSpace,
    x: usize,
    r: f64,
    mask: Option<&SubsetMask>,
) -> Result<f64> {
    if u.len() != space.len() {
        return Err(Error::LengthMismatch {
            expected: space.len(),
            got: u.len(),
        });
    }
    let mut values = Vec::new();
    let mut weights = Vec::new();
    for y in space.ball(x, r) {
        if mask.is_none_or(|m| m.contains(y)) {
            values.push(u[y]);
            weights.push(space.weight(y));
        }
    }
    if values.is_empty() {
        return Err(Error::EmptyIntersection);
    }
    Ok(median_of(&values, &weights))
}

/// Both sides of `|m_u(A) - c| <= (2 * avg_A |u - c|^eta)^{1/eta}`.
pub fn median_defect(sample: &WeightedSample, c: f64, eta: f64) -> Result<(f64, f64)> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(invalid(format!("eta must lie in (0, 1], got {eta}")));
    }
    let lhs = (sample.median() - c).abs();
    let total = sample.total_weight();
    let avg: f64 = sample
        .values
        .iter()
        .zip(&sample.weights)
        .map(|(v, w)| w * (v - c).abs().powf(eta))
        .sum::<f64>()
        / total;
    Ok((lhs, (2.0 * avg).powf(1.0 / eta)))
}
