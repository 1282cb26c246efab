//! Empirical constants for Poincaré-type inequalities satisfied by functions
//! with a fractional gradient. Each check scans balls `B(x, 2^{-k})` and
//! reports the largest ratio of the left side to the right side.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::median::median_of;
use crate::norms::GradientSequence;
use crate::space::MetricMeasureSpace;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    /// Largest `lhs / rhs` over samples with `rhs > 0`.
    pub max_ratio: f64,
    pub samples: usize,
    /// Samples with `rhs = 0` but a nonzero left side.
    pub violations: usize,
}

impl RatioReport {
    fn merge(self, other: Self) -> Self {
        Self {
            max_ratio: self.max_ratio.max(other.max_ratio),
            samples: self.samples + other.samples,
            violations: self.violations + other.violations,
        }
    }

    fn empty() -> Self {
        Self {
            max_ratio: 0.0,
            samples: 0,
            violations: 0,
        }
    }

    fn record(&mut self, lhs: f64, rhs: f64, tol: f64) {
        self.samples += 1;
        if rhs > 0.0 {
            self.max_ratio = self.max_ratio.max(lhs / rhs);
        } else if lhs > tol {
            self.violations += 1;
        }
    }
}

/// Centers and scales to sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSampling {
    /// Every `stride`-th point is a center.
    pub stride: usize,
    pub ks: Vec<i32>,
}

impl CheckSampling {
    fn centers(&self, n: usize) -> Result<Vec<usize>> {
        if self.stride == 0 || self.ks.is_empty() {
            return Err(invalid(
                "sampling needs a positive stride and at least one scale",
            ));
        }
        Ok((0..n).step_by(self.stride).collect())
    }
}

fn ball_average(space: &MetricMeasureSpace, x: usize, r: f64, f: impl Fn(usize) -> f64) -> f64 {
    let (mut sum, mut mass) = (0.0, 0.0);
    space.for_each_in_ball(x, r, |y, _| {
        sum += space.weight(y) * f(y);
        mass += space.weight(y);
    });
    sum / mass
}

fn ball_median(u: &[f64], space: &MetricMeasureSpace, x: usize, r: f64) -> f64 {
    let ball = space.ball(x, r);
    let values: Vec<f64> = ball.iter().map(|&y| u[y]).collect();
    let weights: Vec<f64> = ball.iter().map(|&y| space.weight(y)).collect();
    median_of(&values, &weights)
}

fn run(
    u: &[f64],
    gs: &GradientSequence,
    space: &MetricMeasureSpace,
    sampling: &CheckSampling,
    sample: impl Fn(usize, i32) -> (f64, f64) + Sync,
) -> Result<RatioReport> {
    crate::norms::check_len(u, space)?;
    if gs.n_points() != space.len() {
        return Err(crate::Error::LengthMismatch {
            expected: space.len(),
            got: gs.n_points(),
        });
    }
    let tol = 1e-12 * (1.0 + u.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    let centers = sampling.centers(space.len())?;
    Ok(centers
        .par_iter()
        .map(|&x| {
            let mut rep = RatioReport::empty();
            for &k in &sampling.ks {
                let (lhs, rhs) = sample(x, k);
                rep.record(lhs, rhs, tol);
            }
            rep
        })
        .reduce(RatioReport::empty, RatioReport::merge))
}

/// `inf_c avg_{B(x, 2^{-k})} |u - c|` against
/// `2^{-ks} sum_{j=k-3}^{k} avg_{B(x, 2^{-k+2})} g_j`.
pub fn poincare_check(
    u: &[f64],
    gs: &GradientSequence,
    space: &MetricMeasureSpace,
    sampling: &CheckSampling,
) -> Result<RatioReport> {
    let s = gs.s;
    run(u, gs, space, sampling, |x, k| {
        let r = 2f64.powi(-k);
        // the weighted median minimizes the mean absolute deviation
        let c = ball_median(u, space, x, r);
        let lhs = ball_average(space, x, r, |y| (u[y] - c).abs());
        let rhs: f64 = ((k - 3)..=k)
            .map(|j| ball_average(space, x, 4.0 * r, |y| gs.value(j, y)))
            .sum::<f64>()
            * 2f64.powf(-f64::from(k) * s);
        (lhs, rhs)
    })
}

/// Tail `2^{-k eps'} sum_{j >= k-2} 2^{-j(s - eps')} (avg_{B(x, 2^{-k+1})} g_j^t)^{1/t}`.
fn tail_sum(
    gs: &GradientSequence,
    space: &MetricMeasureSpace,
    x: usize,
    k: i32,
    eps_prime: f64,
    t: f64,
) -> f64 {
    let r = 2f64.powi(-k + 1);
    let lo = (k - 2).max(gs.k_min);
    (lo..=gs.k_max())
        .map(|j| {
            2f64.powf(-f64::from(j) * (gs.s - eps_prime))
                * ball_average(space, x, r, |y| gs.value(j, y).powf(t)).powf(1.0 / t)
        })
        .sum::<f64>()
        * 2f64.powf(-f64::from(k) * eps_prime)
}

/// `avg_B |u - u_B|` on `B = B(x, 2^{-k})` against the tail sum with `g_j^p`.
pub fn sobolev_poincare_check(
    u: &[f64],
    gs: &GradientSequence,
    space: &MetricMeasureSpace,
    sampling: &CheckSampling,
    eps_prime: f64,
    p: f64,
) -> Result<RatioReport> {
    if !(eps_prime > 0.0 && eps_prime < gs.s) || !(p > 0.0) {
        return Err(invalid("need 0 < eps' < s and p > 0"));
    }
    run(u, gs, space, sampling, |x, k| {
        let r = 2f64.powi(-k);
        let mean = ball_average(space, x, r, |y| u[y]);
        let lhs = ball_average(space, x, r, |y| (u[y] - mean).abs());
        (lhs, tail_sum(gs, space, x, k, eps_prime, p))
    })
}

/// `|m_u(B(x, 2^{-k-1})) - m_u(B(x, 2^{-k}))|` against the tail sum with `g_j^t`.
pub fn median_difference_check(
    u: &[f64],
    gs: &GradientSequence,
    space: &MetricMeasureSpace,
    sampling: &CheckSampling,
    eps_prime: f64,
    t: f64,
) -> Result<RatioReport> {
    if !(eps_prime > 0.0 && eps_prime < gs.s) || !(t > 0.0) {
        return Err(invalid("need 0 < eps' < s and t > 0"));
    }
    run(u, gs, space, sampling, |x, k| {
        let r = 2f64.powi(-k);
        let lhs = (ball_median(u, space, x, r / 2.0) - ball_median(u, space, x, r)).abs();
        (lhs, tail_sum(gs, space, x, k, eps_prime, t))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::canonical_gradient;
    use crate::space::{Bbox, Region, SubsetMask};

    #[test]
    fn constant_has_zero_left_side() {
        let space =
            MetricMeasureSpace::build_grid(&Region::Full, 0.125, &Bbox::cube(0.0, 1.0, 2)).unwrap();
        let u = vec![1.0; space.len()];
        let gs = canonical_gradient(&u, &SubsetMask::full(space.len()), &space, 0.5).unwrap();
        let sampling = CheckSampling {
            stride: 3,
            ks: vec![0, 1, 2],
        };
        let r = poincare_check(&u, &gs, &space, &sampling).unwrap();
        assert_eq!(r.max_ratio, 0.0);
        assert_eq!(r.violations, 0);
        assert!(r.samples > 0);
    }

    #[test]
    fn linear_function_has_finite_ratios() {
        let space = MetricMeasureSpace::build_grid(&Region::Full, 0.0625, &Bbox::cube(0.0, 1.0, 2))
            .unwrap();
        let u: Vec<f64> = (0..space.len())
            .map(|i| space.coords(i).unwrap()[0])
            .collect();
        let gs = canonical_gradient(&u, &SubsetMask::full(space.len()), &space, 0.5).unwrap();
        let sampling = CheckSampling {
            stride: 7,
            ks: vec![1, 2, 3],
        };
        for r in [
            poincare_check(&u, &gs, &space, &sampling).unwrap(),
            sobolev_poincare_check(&u, &gs, &space, &sampling, 0.25, 2.0).unwrap(),
            median_difference_check(&u, &gs, &space, &sampling, 0.25, 0.5).unwrap(),
        ] {
            assert!(r.max_ratio.is_finite() && r.max_ratio > 0.0);
            assert_eq!(r.violations, 0);
        }
    }
}
