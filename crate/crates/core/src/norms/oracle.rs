//! Exact infimum over fractional gradients via conic programs.
//!
//! For `p >= 1` the problem "minimize the mixed norm of `(g_k)` subject to
//! `g_k(x) + g_k(y) >= |u(x) - u(y)| d(x, y)^{-s}` on every annulus pair" is
//! convex. With `q = p` (either mixed norm) and with the Besov norm at
//! `q = inf` it splits into one program per scale; the Triebel–Lizorkin norm
//! at `q = inf` and the single-gradient Hajłasz norm reduce to one program
//! over all pairs.

use std::collections::BTreeMap;

use clarabel::algebra::CscMatrix;
use clarabel::solver::SupportedConeT::{NonnegativeConeT, PowerConeT, SecondOrderConeT, ZeroConeT};
use clarabel::solver::{
    DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
};
use serde::{Deserialize, Serialize};

use super::{annulus_index, check_len, set_range, Exponent, GradientSequence, SmoothnessParams};
use crate::error::{Error, Result};
use crate::space::{MetricMeasureSpace, SubsetMask};

/// Largest set the oracle accepts.
pub const ORACLE_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    /// `inf || (g_k) ||_{L^p(S, l^q)}`.
    TriebelLizorkin,
    /// `inf || (g_k) ||_{l^q(L^p(S))}`.
    Besov,
    /// `inf || g ||_{L^p(S)}` over single s-gradients.
    HajlaszSp,
}

/// Smallest `(w_a g_a^p + w_b g_b^p)^{1/p}` subject to `g_a + g_b >= c`.
pub fn pair_lower_bound(w_a: f64, w_b: f64, c: f64, p: f64) -> f64 {
    if p == 1.0 {
        return c * w_a.min(w_b);
    }
    let e = -1.0 / (p - 1.0);
    c * (w_a.powf(e) + w_b.powf(e)).powf(-(p - 1.0) / p)
}

/// Optimal value and minimizing gradient. The minimizer is defined on every
/// point of the parent space and vanishes off `set`.
pub fn infimum_gradient(
    u: &[f64],
    set: &SubsetMask,
    space: &MetricMeasureSpace,
    params: &SmoothnessParams,
    kind: OracleKind,
) -> Result<(f64, GradientSequence)> {
    params.validate()?;
    check_len(u, space)?;
    set.check_parent(space)?;
    if set.count() > ORACLE_CAP {
        return Err(Error::SizeCap {
            size: set.count(),
            cap: ORACLE_CAP,
        });
    }
    let p = params.p;
    let q_matches = params.q.is_infinite() || params.q == Exponent::Finite(p);
    if p < 1.0 || (kind != OracleKind::HajlaszSp && !q_matches) {
        return Err(Error::NonConvexRange);
    }
    let n = space.len();
    let s = params.s;
    let Some((k_min, k_max)) = set_range(space, set) else {
        return Ok((0.0, GradientSequence::zeros(0, -1, s, n)));
    };
    let ids = set.ids();
    let weights: Vec<f64> = ids.iter().map(|&x| space.weight(x)).collect();
    let mut by_scale: BTreeMap<i32, Vec<(usize, usize, f64)>> = BTreeMap::new();
    for a in 0..ids.len() {
        for b in a + 1..ids.len() {
            let d = space.distance(ids[a], ids[b]);
            let c = (u[ids[a]] - u[ids[b]]).abs() / d.powf(s);
            if c > 0.0 {
                by_scale
                    .entry(annulus_index(d))
                    .or_default()
                    .push((a, b, c));
            }
        }
    }
    let mut gs = GradientSequence::zeros(k_min, k_max, s, n);
    let joint = kind == OracleKind::HajlaszSp
        || (kind == OracleKind::TriebelLizorkin && params.q.is_infinite());
    if joint {
        let pairs: Vec<(usize, usize, f64)> = by_scale.into_values().flatten().collect();
        let (value, g) = solve_pairs(&weights, &pairs, p)?;
        for k in k_min..=k_max {
            let slot = gs.scale_mut(k);
            for (a, &x) in ids.iter().enumerate() {
                slot[x] = g[a];
            }
        }
        return Ok((value, gs));
    }
    let mut per_scale = Vec::new();
    for (k, pairs) in &by_scale {
        let (value, g) = solve_pairs(&weights, pairs, p)?;
        let slot = gs.scale_mut(*k);
        for (a, &x) in ids.iter().enumerate() {
            slot[x] = g[a];
        }
        per_scale.push(value);
    }
    let value = match params.q {
        Exponent::Infinite => per_scale.into_iter().fold(0.0, f64::max),
        Exponent::Finite(_) => per_scale
            .iter()
            .map(|v| v.powf(p))
            .sum::<f64>()
            .powf(1.0 / p),
    };
    Ok((value, gs))
}

/// Minimizes `(sum w_a g_a^p)^{1/p}` subject to `g_a + g_b >= c` for every
/// listed pair and `g >= 0`.
fn solve_pairs(weights: &[f64], pairs: &[(usize, usize, f64)], p: f64) -> Result<(f64, Vec<f64>)> {
    let mut g = vec![0.0; weights.len()];
    if pairs.is_empty() {
        return Ok((0.0, g));
    }
    // only points that appear in a constraint get a variable
    let mut var_of = vec![usize::MAX; weights.len()];
    let mut points = Vec::new();
    for &(a, b, _) in pairs {
        for x in [a, b] {
            if var_of[x] == usize::MAX {
                var_of[x] = points.len();
                points.push(x);
            }
        }
    }
    let m = points.len();
    let w_max = points.iter().map(|&x| weights[x]).fold(0.0, f64::max);
    let c_max = pairs.iter().map(|e| e.2).fold(0.0, f64::max);
    let w: Vec<f64> = points.iter().map(|&x| weights[x] / w_max).collect();

    let mut rows = Vec::new();
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    let mut b = Vec::new();
    let mut cones: Vec<SupportedConeT<f64>> = Vec::new();
    let mut row = 0usize;
    let mut push = |r: usize, c: usize, v: f64| {
        rows.push(r);
        cols.push(c);
        vals.push(v);
    };

    // variable layout: [t?, g (m), z (m)?]
    let (g_off, n_vars, objective) = if p == 1.0 {
        (0, m, w.clone())
    } else if p == 2.0 {
        let mut obj = vec![0.0; m + 1];
        obj[0] = 1.0;
        (1, m + 1, obj)
    } else {
        let mut obj = vec![0.0; 2 * m + 1];
        obj[0] = 1.0;
        (1, 2 * m + 1, obj)
    };

    if p != 1.0 && p != 2.0 {
        // sum w z - t = 0
        push(row, 0, -1.0);
        for (i, wi) in w.iter().enumerate() {
            push(row, 1 + m + i, *wi);
        }
        b.push(0.0);
        row += 1;
        cones.push(ZeroConeT(1));
    }
    for &(a, bb, c) in pairs {
        push(row, g_off + var_of[a], -1.0);
        push(row, g_off + var_of[bb], -1.0);
        b.push(-c / c_max);
        row += 1;
    }
    for i in 0..m {
        push(row, g_off + i, -1.0);
        b.push(0.0);
        row += 1;
    }
    cones.push(NonnegativeConeT(pairs.len() + m));
    if p == 2.0 {
        push(row, 0, -1.0);
        b.push(0.0);
        row += 1;
        for (i, wi) in w.iter().enumerate() {
            push(row, 1 + i, -wi.sqrt());
            b.push(0.0);
            row += 1;
        }
        cones.push(SecondOrderConeT(m + 1));
    } else if p != 1.0 {
        // (z_i, t, g_i) in the power cone: z^{1/p} t^{1-1/p} >= |g|
        for i in 0..m {
            push(row, 1 + m + i, -1.0);
            push(row + 1, 0, -1.0);
            push(row + 2, 1 + i, -1.0);
            b.extend([0.0, 0.0, 0.0]);
            row += 3;
            cones.push(PowerConeT(1.0 / p));
        }
    }

    let a_mat = CscMatrix::new_from_triplets(row, n_vars, rows, cols, vals);
    let p_mat = CscMatrix::<f64>::zeros((n_vars, n_vars));
    let settings = DefaultSettingsBuilder::default()
        .verbose(false)
        .build()
        .map_err(|e| Error::Solver(format!("{e:?}")))?;
    let mut solver = DefaultSolver::new(&p_mat, &objective, &a_mat, &b, &cones, settings)
        .map_err(|e| Error::Solver(format!("{e:?}")))?;
    solver.solve();
    match solver.solution.status {
        SolverStatus::Solved | SolverStatus::AlmostSolved => {}
        other => return Err(Error::Solver(format!("status {other:?}"))),
    }
    let x = &solver.solution.x;
    for (i, &pt) in points.iter().enumerate() {
        g[pt] = x[g_off + i].max(0.0) * c_max;
    }
    let value = points
        .iter()
        .map(|&pt| weights[pt] * g[pt].powf(p))
        .sum::<f64>()
        .powf(1.0 / p);
    Ok((value, g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_points() -> (MetricMeasureSpace, SubsetMask) {
        let space = MetricMeasureSpace::from_cloud(&[vec![0.0], vec![0.6]], &[1.0, 1.0]).unwrap();
        (space, SubsetMask::full(2))
    }

    #[test]
    fn two_point_hajlasz_optimum() {
        let (space, set) = two_points();
        let params = SmoothnessParams::new(0.5, 2.0, Exponent::Finite(2.0)).unwrap();
        let (value, g) =
            infimum_gradient(&[0.0, 1.0], &set, &space, &params, OracleKind::HajlaszSp).unwrap();
        let c = 1.0 / 0.6f64.sqrt();
        assert!((value - c / 2f64.sqrt()).abs() < 1e-6, "{value}");
        assert!((g.value(0, 0) - c / 2.0).abs() < 1e-6);
        assert!((value - pair_lower_bound(1.0, 1.0, c, 2.0)).abs() < 1e-6);
    }

    #[test]
    fn general_power_matches_pair_bound() {
        let (space, set) = two_points();
        for p in [1.0, 1.5, 3.0] {
            let params = SmoothnessParams::new(0.5, p, Exponent::Finite(p)).unwrap();
            let (value, _) =
                infimum_gradient(&[0.0, 1.0], &set, &space, &params, OracleKind::Besov).unwrap();
            let c = 1.0 / 0.6f64.sqrt();
            assert!(
                (value - pair_lower_bound(1.0, 1.0, c, p)).abs() < 1e-6,
                "p={p}: {value}"
            );
        }
    }

    #[test]
    fn constant_function_costs_nothing() {
        let (space, set) = two_points();
        let params = SmoothnessParams::new(0.5, 1.0, Exponent::Infinite).unwrap();
        let (value, _) = infimum_gradient(
            &[2.0, 2.0],
            &set,
            &space,
            &params,
            OracleKind::TriebelLizorkin,
        )
        .unwrap();
        assert_eq!(value, 0.0);
    }

    #[test]
    fn rejects_nonconvex_and_oversized_requests() {
        let (space, set) = two_points();
        let params = SmoothnessParams::new(0.5, 0.5, Exponent::Finite(0.5)).unwrap();
        assert!(matches!(
            infimum_gradient(&[0.0, 1.0], &set, &space, &params, OracleKind::Besov),
            Err(Error::NonConvexRange)
        ));
        let params = SmoothnessParams::new(0.5, 2.0, Exponent::Finite(1.0)).unwrap();
        assert!(matches!(
            infimum_gradient(&[0.0, 1.0], &set, &space, &params, OracleKind::Besov),
            Err(Error::NonConvexRange)
        ));
        let pts: Vec<Vec<f64>> = (0..65).map(|i| vec![i as f64]).collect();
        let big = MetricMeasureSpace::from_cloud(&pts, &[1.0; 65]).unwrap();
        let u: Vec<f64> = (0..65).map(|i| i as f64).collect();
        let params = SmoothnessParams::new(0.5, 2.0, Exponent::Finite(2.0)).unwrap();
        assert!(matches!(
            infimum_gradient(&u, &SubsetMask::full(65), &big, &params, OracleKind::Besov),
            Err(Error::SizeCap { .. })
        ));
    }
}
