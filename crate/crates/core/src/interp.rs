//! K-functional between `L^p` and the homogeneous Hajłasz space `M^{1,p}`:
//! an explicit decomposition `f = g + h`, the two-sided envelope from moduli
//! `E_p`, and the Lorentz-space Sobolev embedding check.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cover::{net_cover, net_partition, NetCover};
use crate::error::{invalid, Error, Result};
use crate::median::median_of;
use crate::norms::{
    canonical_gradient, ep_moduli, lorentz_nesting_factor, lorentz_norm, lp_norm_on, sequence_norm,
    Exponent, ScaleGrid, SequenceNorm,
};
use crate::space::{MetricMeasureSpace, SubsetMask};

/// Smallest `C` with `|h(x) - h(y)| <= C d(x, y) (H(x) + H(y))` over all pairs,
/// plus pairs where the right side vanishes but the left does not.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LipschitzValidity {
    pub constant: f64,
    pub violations: usize,
}

/// `f = g + h` with `g` small in `L^p` and `h` having 1-gradient `sharp`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KDecomposition {
    pub t: f64,
    pub g: Vec<f64>,
    pub h: Vec<f64>,
    /// `f^#_t`, a 1-gradient of `h` up to [`Self::validity`].
    pub sharp: Vec<f64>,
    pub net: NetCover,
    pub validity: LipschitzValidity,
}

impl KDecomposition {
    /// `||g||_p + t ||H||_p`.
    pub fn cost(&self, space: &MetricMeasureSpace, p: f64) -> f64 {
        let full = SubsetMask::full(space.len());
        lp_norm_on(&self.g, &full, space, p) + self.t * lp_norm_on(&self.sharp, &full, space, p)
    }
}

/// `f^#_t(x) = sup_{r >= t} r^{-1} (avg_{B(x, r)} |f - f(x)|^p)^{1/p}` for each `t`.
///
/// Open balls around `x` change only at the distinct distances `d_j`, so the
/// supremum is attained either at `r = t` (ball `{d < t}`) or at `r = d_j`
/// slightly above, whose ball is `{d <= d_j}` and whose factor tends to `1 / d_j`.
pub fn sharp_functions(
    f: &[f64],
    space: &MetricMeasureSpace,
    p: f64,
    ts: &[f64],
) -> Result<Vec<Vec<f64>>> {
    crate::norms::check_len(f, space)?;
    if !(p > 0.0) || !p.is_finite() {
        return Err(invalid("p must lie in (0, inf)"));
    }
    if ts.iter().any(|t| !(*t > 0.0)) {
        return Err(invalid("scales must be positive"));
    }
    let rows: Vec<Vec<f64>> = (0..space.len())
        .into_par_iter()
        .map(|x| {
            let order = space.sorted_from(x);
            // (distance, avg over {d <= distance})
            let mut groups: Vec<(f64, f64)> = Vec::new();
            let (mut sum, mut mass) = (0.0, 0.0);
            let mut i = 0;
            while i < order.len() {
                let d = order[i].0;
                while i < order.len() && order[i].0 == d {
                    let y = order[i].1;
                    sum += space.weight(y) * (f[y] - f[x]).abs().powf(p);
                    mass += space.weight(y);
                    i += 1;
                }
                groups.push((d, sum / mass));
            }
            let mut suffix = vec![0.0f64; groups.len() + 1];
            for j in (0..groups.len()).rev() {
                let (d, a) = groups[j];
                let v = if d > 0.0 { a.powf(1.0 / p) / d } else { 0.0 };
                suffix[j] = suffix[j + 1].max(v);
            }
            ts.iter()
                .map(|&t| {
                    let first = groups.partition_point(|g| g.0 < t);
                    let at_t = if first > 0 {
                        groups[first - 1].1.powf(1.0 / p) / t
                    } else {
                        0.0
                    };
                    at_t.max(suffix[first])
                })
                .collect()
        })
        .collect();
    Ok((0..ts.len())
        .map(|j| rows.iter().map(|r| r[j]).collect())
        .collect())
}

fn lipschitz_validity(h: &[f64], grad: &[f64], space: &MetricMeasureSpace) -> LipschitzValidity {
    let n = space.len();
    let scale = 1.0 + h.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let (constant, violations) = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut c = 0.0f64;
            let mut bad = 0usize;
            for y in (x + 1)..n {
                let diff = (h[x] - h[y]).abs();
                let rhs = space.distance(x, y) * (grad[x] + grad[y]);
                if rhs > 0.0 {
                    c = c.max(diff / rhs);
                } else if diff > 1e-12 * scale {
                    bad += 1;
                }
            }
            (c, bad)
        })
        .reduce(|| (0.0, 0), |a, b| (a.0.max(b.0), a.1 + b.1));
    LipschitzValidity {
        constant,
        violations,
    }
}

fn decompose_with_sharp(
    f: &[f64],
    space: &MetricMeasureSpace,
    t: f64,
    sharp: Vec<f64>,
) -> Result<KDecomposition> {
    let net = net_cover(space, t / 6.0)?;
    let pou = net_partition(&net, space)?;
    let medians: Vec<f64> = net
        .centers
        .par_iter()
        .map(|&c| {
            let ball = space.ball(c, net.radius);
            let values: Vec<f64> = ball.iter().map(|&y| f[y]).collect();
            let weights: Vec<f64> = ball.iter().map(|&y| space.weight(y)).collect();
            median_of(&values, &weights)
        })
        .collect();
    let h: Vec<f64> = (0..space.len())
        .map(|x| pou.row(x).iter().map(|&(i, phi)| phi * medians[i]).sum())
        .collect();
    let g: Vec<f64> = f.iter().zip(&h).map(|(a, b)| a - b).collect();
    let validity = lipschitz_validity(&h, &sharp, space);
    Ok(KDecomposition {
        t,
        g,
        h,
        sharp,
        net,
        validity,
    })
}

/// Decomposition at scale `t` over a `t/6`-net with the tent partition.
pub fn k_decomposition(
    f: &[f64],
    space: &MetricMeasureSpace,
    t: f64,
    p: f64,
) -> Result<KDecomposition> {
    if !(t > 0.0) {
        return Err(invalid("t must be positive"));
    }
    let sharp = sharp_functions(f, space, p, &[t])?
        .pop()
        .unwrap_or_default();
    decompose_with_sharp(f, space, t, sharp)
}

/// Lower proxy, achieved cost and upper envelope of `K(f, t)` on a set of scales.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KProfile {
    pub p: f64,
    pub t: Vec<f64>,
    /// `E_p(f, t)`.
    pub lower: Vec<f64>,
    /// `||g||_p + t ||H||_p` for the constructed decomposition.
    pub achieved: Vec<f64>,
    /// `(sum_{k >= 0} 2^{-k p~} E_p(f, 2^k t)^{p~})^{1/p~}`, `p~ = min(p, 1)`.
    pub upper: Vec<f64>,
    /// Overlap of the doubled net balls at each scale.
    pub overlap: Vec<usize>,
    /// Validity constant of `(h, H)` at each scale.
    pub validity: Vec<f64>,
    pub validity_violations: usize,
    /// Costs at or below this level are rounding noise and are skipped by the ratios.
    pub floor: f64,
}

impl KProfile {
    /// Largest `lower / achieved` over scales with achieved cost above `floor`.
    pub fn lower_ratio(&self) -> f64 {
        max_ratio(&self.lower, &self.achieved, self.floor)
    }

    /// Largest `achieved / upper`.
    pub fn upper_ratio(&self) -> f64 {
        max_ratio(&self.achieved, &self.upper, self.floor)
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# besovkit {} p={}\nt,lower,achieved,upper\n",
            crate::VERSION,
            self.p
        );
        for i in 0..self.t.len() {
            out.push_str(&format!(
                "{:e},{:e},{:e},{:e}\n",
                self.t[i], self.lower[i], self.achieved[i], self.upper[i]
            ));
        }
        out
    }
}

fn max_ratio(num: &[f64], den: &[f64], floor: f64) -> f64 {
    num.iter().zip(den).fold(0.0f64, |m, (a, b)| {
        if *b > floor {
            m.max(a / b)
        } else if *a > floor {
            f64::INFINITY
        } else {
            m
        }
    })
}

pub fn k_profile(f: &[f64], space: &MetricMeasureSpace, p: f64, ts: &[f64]) -> Result<KProfile> {
    crate::norms::check_len(f, space)?;
    if space.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let diam = space.diameter();
    if ts.is_empty() || ts.iter().any(|t| !(*t > 0.0) || *t > diam) {
        return Err(invalid(format!("scales must lie in (0, {diam}]")));
    }
    let pt = p.min(1.0);
    // E_p is constant once the open ball is the whole space, i.e. t > diam.
    let horizon: Vec<usize> = ts
        .iter()
        .map(|&t| {
            let mut k = 0;
            while t * 2f64.powi(k as i32) <= diam {
                k += 1;
            }
            k
        })
        .collect();
    let mut scales: Vec<f64> = Vec::new();
    for (&t, &kk) in ts.iter().zip(&horizon) {
        for k in 0..=kk {
            scales.push(t * 2f64.powi(k as i32));
        }
    }
    let e_all = ep_moduli(f, space, &scales, p)?;
    let sharps = sharp_functions(f, space, p, ts)?;
    let mut out = KProfile {
        p,
        t: ts.to_vec(),
        lower: Vec::new(),
        achieved: Vec::new(),
        upper: Vec::new(),
        overlap: Vec::new(),
        validity: Vec::new(),
        validity_violations: 0,
        floor: 64.0
            * f64::EPSILON
            * lp_norm(f, space, p)
            * (1.0 + ts.iter().copied().fold(0.0, f64::max)),
    };
    let mut offset = 0;
    for ((&t, &kk), sharp) in ts.iter().zip(&horizon).zip(sharps) {
        let e = &e_all[offset..=offset + kk];
        offset += kk + 1;
        let mut sum: f64 = (0..kk)
            .map(|k| 2f64.powf(-(k as f64) * pt) * e[k].powf(pt))
            .sum();
        let tail = 2f64.powf(-(kk as f64) * pt) / (1.0 - 2f64.powf(-pt));
        sum += tail * e[kk].powf(pt);
        let dec = decompose_with_sharp(f, space, t, sharp)?;
        out.lower.push(e[0]);
        out.achieved.push(dec.cost(space, p));
        out.upper.push(sum.powf(1.0 / pt));
        out.overlap.push(dec.net.overlap);
        out.validity.push(dec.validity.constant);
        out.validity_violations += dec.validity.violations;
    }
    Ok(out)
}

fn lp_norm(f: &[f64], space: &MetricMeasureSpace, p: f64) -> f64 {
    let sum: f64 = f
        .iter()
        .zip(space.weights())
        .map(|(v, w)| w * v.abs().powf(p))
        .sum();
    sum.powf(1.0 / p)
}

/// `(sum_t w_t (t^{-s} K(t))^q)^{1/q}` with the achieved costs as `K`.
pub fn interpolation_norm(
    f: &[f64],
    space: &MetricMeasureSpace,
    s: f64,
    p: f64,
    q: Exponent,
    grid: &ScaleGrid,
) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(invalid("s must lie in (0, 1)"));
    }
    let profile = k_profile(f, space, p, &grid.t)?;
    Ok(grid.integrate(&profile.achieved, s, q))
}

/// Number of candidate shifts in the first pass of [`lorentz_min_over_c`].
pub const SHIFT_CANDIDATES: usize = 512;

/// `min_c ||u - c||_{L^{p,q}}` by a scan over [`SHIFT_CANDIDATES`] shifts in
/// `[min u, max u]` refined with golden-section search. Returns `(value, c)`.
pub fn lorentz_min_over_c(
    u: &[f64],
    space: &MetricMeasureSpace,
    p: f64,
    q: Exponent,
) -> Result<(f64, f64)> {
    crate::norms::check_len(u, space)?;
    let lo = u.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() {
        return Err(Error::EmptyDomain);
    }
    let eval = |c: f64| -> Result<f64> {
        let shifted: Vec<f64> = u.iter().map(|v| v - c).collect();
        lorentz_norm(&shifted, space, p, q)
    };
    if hi == lo {
        return Ok((eval(lo)?, lo));
    }
    let step = (hi - lo) / (SHIFT_CANDIDATES - 1) as f64;
    let cands: Vec<f64> = (0..SHIFT_CANDIDATES)
        .map(|i| lo + step * i as f64)
        .collect();
    let vals = cands
        .par_iter()
        .map(|&c| eval(c))
        .collect::<Result<Vec<f64>>>()?;
    let best = (0..vals.len()).fold(0, |b, i| if vals[i] < vals[b] { i } else { b });
    let (mut a, mut b) = (
        cands[best.saturating_sub(1)],
        cands[(best + 1).min(cands.len() - 1)],
    );
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c1 = b - ratio * (b - a);
    let mut c2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (eval(c1)?, eval(c2)?);
    for _ in 0..60 {
        if f1 <= f2 {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - ratio * (b - a);
            f1 = eval(c1)?;
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + ratio * (b - a);
            f2 = eval(c2)?;
        }
    }
    let (fc, c) = if f1 <= f2 { (f1, c1) } else { (f2, c2) };
    Ok(if fc < vals[best] {
        (fc, c)
    } else {
        (vals[best], cands[best])
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingCheck {
    /// `p* = Qp / (Q - sp)`.
    pub p_star: f64,
    /// `min_c ||u - c||_{L^{p*, q}}`.
    pub lhs: f64,
    /// `min_c ||u - c||_{L^{p*, inf}}`.
    pub lhs_weak: f64,
    /// `(q / p*)^{1/q}`, bounding `lhs_weak / lhs`.
    pub nesting_factor: f64,
    /// Homogeneous Besov norm from the canonical gradient.
    pub rhs: f64,
    pub ratio: f64,
    pub best_shift: f64,
}

/// Compares `min_c ||u - c||_{L^{p*, q}}` against the homogeneous Besov norm,
/// using `dimension` as the exponent `Q`.
pub fn lorentz_embedding_check(
    u: &[f64],
    space: &MetricMeasureSpace,
    s: f64,
    p: f64,
    q: Exponent,
    dimension: f64,
) -> Result<EmbeddingCheck> {
    if !(s > 0.0 && s < 1.0) || !(p > 0.0) || !(q.value() > 0.0) {
        return Err(invalid("need s in (0, 1), p > 0 and q > 0"));
    }
    if s * p >= dimension {
        return Err(Error::Supercritical);
    }
    let p_star = dimension * p / (dimension - s * p);
    let (lhs, best_shift) = lorentz_min_over_c(u, space, p_star, q)?;
    let (lhs_weak, _) = lorentz_min_over_c(u, space, p_star, Exponent::Infinite)?;
    let full = SubsetMask::full(space.len());
    let grad = canonical_gradient(u, &full, space, s)?;
    let rhs = sequence_norm(&grad, &full, space, p, q, SequenceNorm::LqLp);
    let ratio = if rhs > 0.0 {
        lhs / rhs
    } else if lhs > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    Ok(EmbeddingCheck {
        p_star,
        lhs,
        lhs_weak,
        nesting_factor: match q {
            Exponent::Finite(qv) => lorentz_nesting_factor(p_star, qv),
            Exponent::Infinite => 1.0,
        },
        rhs,
        ratio,
        best_shift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{Bbox, Region};

    fn square(h: f64) -> MetricMeasureSpace {
        MetricMeasureSpace::build_grid(&Region::Full, h, &Bbox::cube(0.0, 1.0, 2)).unwrap()
    }

    #[test]
    fn constant_decomposes_trivially() {
        let space = square(0.25);
        let f = vec![2.5; space.len()];
        let d = k_decomposition(&f, &space, 0.5, 2.0).unwrap();
        assert!(d.h.iter().all(|v| (v - 2.5).abs() < 1e-14));
        assert!(d.g.iter().all(|v| v.abs() < 1e-14));
        assert!(d.sharp.iter().all(|v| *v == 0.0));
        let prof = k_profile(&f, &space, 2.0, &[0.25, 0.5]).unwrap();
        assert!(prof
            .lower
            .iter()
            .chain(&prof.achieved)
            .chain(&prof.upper)
            .all(|v| *v < 1e-13));
    }

    #[test]
    fn separated_indicator_is_its_own_h() {
        let space = MetricMeasureSpace::from_cloud(&[vec![0.0], vec![2.0]], &[1.0, 1.0]).unwrap();
        let f = [1.0, 0.0];
        let d = k_decomposition(&f, &space, 1.0, 1.0).unwrap();
        assert_eq!(d.h, vec![1.0, 0.0]);
        assert_eq!(d.g, vec![0.0, 0.0]);
    }

    #[test]
    fn sharp_function_two_points() {
        // f = (0, 1) at distance 2, weights 1: at r in (2, inf) the average is 1/2
        let space = MetricMeasureSpace::from_cloud(&[vec![0.0], vec![2.0]], &[1.0, 1.0]).unwrap();
        let s = sharp_functions(&[0.0, 1.0], &space, 1.0, &[1.0, 3.0]).unwrap();
        assert!((s[0][0] - 0.25).abs() < 1e-15);
        assert!((s[1][0] - 0.5 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn embedding_constant_and_supercritical() {
        let space = square(0.25);
        let r = lorentz_embedding_check(
            &vec![1.0; space.len()],
            &space,
            0.5,
            1.0,
            Exponent::Finite(1.0),
            2.0,
        )
        .unwrap();
        assert!(r.lhs < 1e-12);
        let err = lorentz_embedding_check(
            &vec![1.0; space.len()],
            &space,
            0.5,
            4.0,
            Exponent::Finite(1.0),
            2.0,
        );
        assert!(matches!(err, Err(Error::Supercritical)));
    }
}
