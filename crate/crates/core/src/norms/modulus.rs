//! Modulus-of-smoothness quantities and the Besov and Triebel–Lizorkin norms
//! built from them.
//!
//! On grid spaces every ball `B(x, t)` is the open lattice ball around `x`
//! and its measure is the measure of the same ball in the infinite lattice,
//! so the averaged moduli are exact averages over translations.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_len, lp_norm_on, ScaleGrid, SmoothnessParams};
use crate::error::{invalid, Error, Result};
use crate::median::median_of;
use crate::space::{MetricMeasureSpace, SubsetMask};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BesovVariant {
    /// Translation modulus `omega(u, S, t)_p` (grids only).
    B,
    /// Averaged modulus `E_p(u, S, t)`.
    CalB,
    /// Local best-constant modulus `hat E_p(u, S, t)`.
    HatB,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TlVariant {
    CalF,
    HatF,
    /// `hat F` integrand restricted to `t < tau * dist(x, X \ S)`.
    Truncated {
        tau: f64,
    },
}

/// `E_p(u, t) = (int_X avg_{B(x,t)} |u(x) - u(y)|^p)^{1/p}` with the
/// ball averages taken in the space itself.
pub fn ep_modulus(u: &[f64], space: &MetricMeasureSpace, t: f64, p: f64) -> Result<f64> {
    Ok(ep_moduli(u, space, &[t], p)?[0])
}

/// [`ep_modulus`] at several scales, sharing one sort per point.
pub fn ep_moduli(u: &[f64], space: &MetricMeasureSpace, ts: &[f64], p: f64) -> Result<Vec<f64>> {
    check_len(u, space)?;
    if ts.iter().any(|t| !(*t > 0.0)) || !(p > 0.0) {
        return Err(invalid("E_p needs t > 0 and p > 0"));
    }
    let per_point: Vec<Vec<f64>> = (0..space.len())
        .into_par_iter()
        .map(|x| {
            let order = space.sorted_from(x);
            let mut mass = Vec::with_capacity(order.len());
            let mut diff = Vec::with_capacity(order.len());
            let (mut m, mut s) = (0.0, 0.0);
            for &(_, y) in &order {
                m += space.weight(y);
                s += space.weight(y) * (u[x] - u[y]).abs().powf(p);
                mass.push(m);
                diff.push(s);
            }
            ts.iter()
                .map(|&t| {
                    let end = order.partition_point(|e| e.0 < t);
                    space.weight(x) * diff[end - 1] / mass[end - 1]
                })
                .collect()
        })
        .collect();
    Ok((0..ts.len())
        .map(|j| per_point.iter().map(|r| r[j]).sum::<f64>().powf(1.0 / p))
        .collect())
}

/// Modulus values per scale of a [`ScaleGrid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusProfile {
    pub t: Vec<f64>,
    pub omega: Option<Vec<f64>>,
    pub e: Vec<f64>,
    pub e_hat: Vec<f64>,
}

/// Neighborhoods `B(x, t) ∩ S` with the ball measure used as denominator.
struct Balls<'a> {
    space: &'a MetricMeasureSpace,
    set: &'a SubsetMask,
    t: f64,
    offsets: Option<Vec<[i64; 3]>>,
    lattice_measure: f64,
}

impl<'a> Balls<'a> {
    fn new(space: &'a MetricMeasureSpace, set: &'a SubsetMask, t: f64) -> Self {
        match space.grid() {
            Some(g) => Self {
                space,
                set,
                t,
                offsets: Some(g.offsets_within(t, false)),
                lattice_measure: g.lattice_ball_measure(t),
            },
            None => Self {
                space,
                set,
                t,
                offsets: None,
                lattice_measure: 0.0,
            },
        }
    }

    /// Members of `B(x, t) ∩ S` and the measure of `B(x, t)`.
    fn around(&self, x: usize) -> (Vec<usize>, f64) {
        match (&self.offsets, self.space.grid()) {
            (Some(offsets), Some(g)) => {
                let ids = offsets
                    .iter()
                    .filter_map(|m| g.translate(x, m))
                    .filter(|&y| self.set.contains(y))
                    .collect();
                (ids, self.lattice_measure)
            }
            _ => {
                let mut ids = Vec::new();
                let mut measure = 0.0;
                self.space.for_each_in_ball(x, self.t, |y, _| {
                    measure += self.space.weight(y);
                    if self.set.contains(y) {
                        ids.push(y);
                    }
                });
                ids.sort_unstable();
                (ids, measure)
            }
        }
    }
}

/// `sum w |v - c|^e`.
fn cost(values: &[f64], weights: &[f64], c: f64, e: f64) -> f64 {
    values
        .iter()
        .zip(weights)
        .map(|(v, w)| w * (v - c).abs().powf(e))
        .sum()
}

/// `min_c sum w |v - c|^e`, never above `anchored` (the cost at a given
/// candidate, passed in so callers can rely on the bound bitwise).
fn best_constant_cost(values: &[f64], weights: &[f64], e: f64, anchored: f64) -> f64 {
    if values.is_empty() {
        return anchored;
    }
    let mut best = anchored;
    if e == 2.0 {
        let total: f64 = weights.iter().sum();
        let mean = values.iter().zip(weights).map(|(v, w)| v * w).sum::<f64>() / total;
        best = best.min(cost(values, weights, mean, e));
    } else if e == 1.0 {
        best = best.min(cost(values, weights, median_of(values, weights), e));
    } else if e < 1.0 {
        // concave between consecutive data values, so the minimum is at one of them
        let mut distinct = values.to_vec();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        for c in distinct {
            best = best.min(cost(values, weights, c, e));
        }
    } else {
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        best = best.min(golden_section(|c| cost(values, weights, c, e), lo, hi));
    }
    best
}

/// Minimum of a convex function on `[lo, hi]` by golden-section search.
fn golden_section(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let tol = 1e-10 * (1.0 + lo.abs().max(hi.abs()));
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut iters = 0;
    while b - a > tol && iters < 200 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iters += 1;
    }
    fc.min(fd).min(f(lo)).min(f(hi))
}

/// Per-member inner sums over `B(x, t) ∩ S`: the plain difference sum, the
/// best-constant sum (when requested) and the ball measure.
fn local_sums(u: &[f64], balls: &Balls<'_>, e: f64, with_hat: bool) -> Vec<(f64, f64, f64)> {
    balls
        .set
        .ids()
        .par_iter()
        .map(|&x| {
            let (ids, measure) = balls.around(x);
            let values: Vec<f64> = ids.iter().map(|&y| u[y]).collect();
            let weights: Vec<f64> = ids.iter().map(|&y| balls.space.weight(y)).collect();
            let diff = cost(&values, &weights, u[x], e);
            let hat = if with_hat {
                best_constant_cost(&values, &weights, e, diff)
            } else {
                diff
            };
            (diff, hat, measure)
        })
        .collect()
}

/// `omega(u, S, t)_p = sup_{|h| <= t} (int_{S_h} |u(x + h) - u(x)|^p)^{1/p}`
/// over lattice translations.
fn omega(u: &[f64], space: &MetricMeasureSpace, set: &SubsetMask, t: f64, p: f64) -> Result<f64> {
    let g = space.grid().ok_or(Error::NotAGrid)?;
    let offsets = g.offsets_within(t, true);
    let best = offsets
        .par_iter()
        .map(|m| {
            let mut acc = 0.0;
            for &x in set.ids() {
                if let Some(y) = g.translate(x, m) {
                    if set.contains(y) {
                        acc += space.weight(x) * (u[y] - u[x]).abs().powf(p);
                    }
                }
            }
            acc
        })
        .reduce(|| 0.0, f64::max);
    Ok(best.powf(1.0 / p))
}

/// `omega`, `E_p` and `hat E_p` of `u` on `set` at every scale of `grid`.
///
/// `omega` is computed only on grid spaces and only when requested.
pub fn modulus_profile(
    u: &[f64],
    space: &MetricMeasureSpace,
    set: &SubsetMask,
    p: f64,
    grid: &ScaleGrid,
    with_omega: bool,
) -> Result<ModulusProfile> {
    check_len(u, space)?;
    set.check_parent(space)?;
    if with_omega && space.grid().is_none() {
        return Err(Error::NotAGrid);
    }
    let mut e = Vec::with_capacity(grid.len());
    let mut e_hat = Vec::with_capacity(grid.len());
    let mut om = Vec::new();
    for &t in &grid.t {
        let balls = Balls::new(space, set, t);
        let sums = local_sums(u, &balls, p, true);
        let ids = set.ids();
        let plain: f64 = ids
            .iter()
            .zip(&sums)
            .map(|(&x, s)| space.weight(x) * s.0 / s.2)
            .sum();
        let hat: f64 = ids
            .iter()
            .zip(&sums)
            .map(|(&x, s)| space.weight(x) * s.1 / s.2)
            .sum();
        e.push(plain.powf(1.0 / p));
        e_hat.push(hat.powf(1.0 / p));
        if with_omega {
            om.push(omega(u, space, set, t, p)?);
        }
    }
    Ok(ModulusProfile {
        t: grid.t.clone(),
        omega: with_omega.then_some(om),
        e,
        e_hat,
    })
}

/// The three modulus-based Besov norms of `u` on `set`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesovNorms {
    pub lp: f64,
    /// `||u||_{B}`; present on grid spaces only.
    pub b: Option<f64>,
    pub cal_b: f64,
    pub hat_b: f64,
}

/// `||u||_{L^p(S)} + (int (t^{-s} mod(t))^q dt/t)^{1/q}` for each modulus.
pub fn besov_modulus_norms(
    u: &[f64],
    space: &MetricMeasureSpace,
    set: &SubsetMask,
    params: &SmoothnessParams,
    grid: &ScaleGrid,
) -> Result<BesovNorms> {
    params.validate()?;
    let with_omega = space.grid().is_some();
    let profile = modulus_profile(u, space, set, params.p, grid, with_omega)?;
    let lp = lp_norm_on(u, set, space, params.p);
    let semi = |m: &[f64]| grid.integrate(m, params.s, params.q);
    Ok(BesovNorms {
        lp,
        b: profile.omega.as_ref().map(|m| lp + semi(m)),
        cal_b: lp + semi(&profile.e),
        hat_b: lp + semi(&profile.e_hat),
    })
}

pub fn besov_modulus_norm(
    u: &[f64],
    space: &MetricMeasureSpace,
    set: &SubsetMask,
    params: &SmoothnessParams,
    variant: BesovVariant,
    grid: &ScaleGrid,
) -> Result<f64> {
    if variant == BesovVariant::B && space.grid().is_none() {
        return Err(Error::NotAGrid);
    }
    let norms = besov_modulus_norms(u, space, set, params, grid)?;
    Ok(match variant {
        BesovVariant::B => norms.b.unwrap(),
        BesovVariant::CalB => norms.cal_b,
        BesovVariant::HatB => norms.hat_b,
    })
}

/// Pointwise Triebel–Lizorkin integrand norm `g(x)` on members of `set`
/// (zero elsewhere), using the inner exponent `params.r_or_default()`.
pub fn tl_pointwise(
    u: &[f64],
    space: &MetricMeasureSpace,
    set: &SubsetMask,
    params: &SmoothnessParams,
    variant: TlVariant,
    grid: &ScaleGrid,
) -> Result<Vec<f64>> {
    params.validate()?;
    check_len(u, space)?;
    set.check_parent(space)?;
    let r = params.r_or_default();
    if !(r > 0.0 && r < params.p.min(params.q.value())) {
        return Err(invalid(format!("r must lie in (0, min(p, q)), got {r}")));
    }
    let reach: Option<Vec<f64>> = match variant {
        TlVariant::Truncated { tau } => {
            if !(tau > 0.0 && tau < 1.0) {
                return Err(invalid(format!("tau must lie in (0, 1), got {tau}")));
            }
            let outside = set.complement();
            let delta: Vec<f64> = if outside.is_empty() {
                vec![f64::INFINITY; space.len()]
            } else {
                space.distance_to_set(&outside)
            };
            Some(delta.into_iter().map(|d| tau * d).collect())
        }
        _ => None,
    };
    let use_hat = !matches!(variant, TlVariant::CalF);
    let ids = set.ids();
    // terms[i][j]: t_j^{-s} (avg)^{1/r} at member i
    let mut terms = vec![Vec::with_capacity(grid.len()); ids.len()];
    for &t in &grid.t {
        let balls = Balls::new(space, set, t);
        let sums = local_sums(u, &balls, r, use_hat);
        for (row, s) in terms.iter_mut().zip(&sums) {
            let inner = if use_hat { s.1 } else { s.0 };
            row.push(t.powf(-params.s) * (inner / s.2).powf(1.0 / r));
        }
    }
    let mut g = vec![0.0; space.len()];
    for (row, &x) in terms.iter().zip(ids) {
        let kept = row
            .iter()
            .zip(&grid.t)
            .zip(&grid.weights)
            .filter(|((_, t), _)| reach.as_ref().is_none_or(|lim| **t < lim[x]))
            .map(|((v, _), w)| (*v, *w));
        g[x] = params.q.combine_weighted(kept);
    }
    Ok(g)
}

/// `||u||_{L^p(S)} + ||g||_{L^p(S)}` with `g` from [`tl_pointwise`].
pub fn tl_function_norm(
    u: &[f64],
    space: &MetricMeasureSpace,
    set: &SubsetMask,
    params: &SmoothnessParams,
    variant: TlVariant,
    grid: &ScaleGrid,
) -> Result<f64> {
    let g = tl_pointwise(u, space, set, params, variant, grid)?;
    Ok(lp_norm_on(u, set, space, params.p) + lp_norm_on(&g, set, space, params.p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{Bbox, Region};

    #[test]
    fn two_point_e1() {
        let space = MetricMeasureSpace::from_cloud(&[vec![0.0], vec![1.0]], &[1.0, 1.0]).unwrap();
        let e = ep_modulus(&[0.0, 1.0], &space, 2.0, 1.0).unwrap();
        assert!((e - 1.0).abs() < 1e-15);
    }

    #[test]
    fn omega_of_identity_matches_translation_scan() {
        let h = 1.0 / 16.0;
        let space =
            MetricMeasureSpace::build_grid(&Region::Full, h, &Bbox::cube(0.0, 1.0, 1)).unwrap();
        let u: Vec<f64> = (0..space.len())
            .map(|i| space.coords(i).unwrap()[0])
            .collect();
        let set = SubsetMask::full(space.len());
        let t = 0.25;
        let got = omega(&u, &space, &set, t, 2.0).unwrap();
        // translation by m steps: (n - m) pairs with difference m h
        let n = space.len() as i64;
        let expected = (0..=4)
            .map(|m: i64| ((n - m) as f64 * h * (m as f64 * h).powi(2)).sqrt())
            .fold(0.0, f64::max);
        assert!((got - expected).abs() < 1e-14);
    }

    #[test]
    fn golden_section_finds_interior_minimum() {
        let v = golden_section(|c| (c - 0.3).powi(2) + 1.0, -1.0, 2.0);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn concave_power_minimum_is_at_a_data_value() {
        let values = [0.0, 0.1, 5.0];
        let weights = [1.0, 1.0, 1.0];
        let best = best_constant_cost(&values, &weights, 0.5, f64::INFINITY);
        let at_data = [0.0, 0.1, 5.0]
            .iter()
            .map(|&c| cost(&values, &weights, c, 0.5))
            .fold(f64::INFINITY, f64::min);
        assert_eq!(best, at_data);
        for k in 0..=500 {
            let c = -1.0 + k as f64 * 0.014;
            assert!(cost(&values, &weights, c, 0.5) >= best - 1e-12);
        }
    }
}
