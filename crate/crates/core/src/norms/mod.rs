//! Fractional gradients and the norms built from them.

mod lorentz;
mod maximal;
mod modulus;
mod oracle;

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::report::NormReport;
use crate::space::{MetricMeasureSpace, SubsetMask};

pub use lorentz::{lorentz_nesting_factor, lorentz_norm, lorentz_norm_on};
pub use maximal::{maximal_function, maximal_functions};
pub use modulus::{
    besov_modulus_norm, besov_modulus_norms, ep_moduli, ep_modulus, modulus_profile,
    tl_function_norm, tl_pointwise, BesovNorms, BesovVariant, ModulusProfile, TlVariant,
};
pub use oracle::{infimum_gradient, pair_lower_bound, OracleKind, ORACLE_CAP};

/// Summability exponent, possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawExponent", into = "RawExponent")]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawExponent {
    Number(f64),
    Text(String),
}

impl TryFrom<RawExponent> for Exponent {
    type Error = String;

    fn try_from(raw: RawExponent) -> std::result::Result<Self, String> {
        match raw {
            RawExponent::Number(v) if v.is_infinite() && v > 0.0 => Ok(Exponent::Infinite),
            RawExponent::Number(v) => Ok(Exponent::Finite(v)),
            RawExponent::Text(t) => match t.to_ascii_lowercase().as_str() {
                "inf" | "infinity" => Ok(Exponent::Infinite),
                other => other
                    .parse::<f64>()
                    .map(Exponent::Finite)
                    .map_err(|_| format!("not an exponent: {t}")),
            },
        }
    }
}

impl From<Exponent> for RawExponent {
    fn from(e: Exponent) -> Self {
        match e {
            Exponent::Finite(v) => RawExponent::Number(v),
            Exponent::Infinite => RawExponent::Text("inf".into()),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(v) => write!(f, "{v}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

impl Exponent {
    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    /// Numeric value, `f64::INFINITY` for the infinite exponent.
    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(v) => v,
            Exponent::Infinite => f64::INFINITY,
        }
    }

    /// `l^q` norm of nonnegative values.
    pub fn combine(self, values: impl IntoIterator<Item = f64>) -> f64 {
        match self {
            Exponent::Finite(q) => values
                .into_iter()
                .map(|v| v.powf(q))
                .sum::<f64>()
                .powf(1.0 / q),
            Exponent::Infinite => values.into_iter().fold(0.0, f64::max),
        }
    }

    /// Weighted `l^q` norm `(sum w v^q)^{1/q}`; the weights are ignored for `q = inf`.
    pub fn combine_weighted(self, values: impl IntoIterator<Item = (f64, f64)>) -> f64 {
        match self {
            Exponent::Finite(q) => values
                .into_iter()
                .map(|(v, w)| w * v.powf(q))
                .sum::<f64>()
                .powf(1.0 / q),
            Exponent::Infinite => values.into_iter().fold(0.0, |m, (v, _)| m.max(v)),
        }
    }
}

/// Smoothness `s`, integrability `p`, summability `q` and the inner exponent
/// `r` of the Triebel–Lizorkin difference norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessParams {
    pub s: f64,
    pub p: f64,
    pub q: Exponent,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
}

impl SmoothnessParams {
    pub fn new(s: f64, p: f64, q: Exponent) -> Result<Self> {
        let params = Self { s, p, q, r: None };
        params.validate()?;
        Ok(params)
    }

    pub fn with_r(mut self, r: f64) -> Result<Self> {
        self.r = Some(r);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s > 0.0 && self.s < 1.0) {
            return Err(invalid(format!("s must lie in (0, 1), got {}", self.s)));
        }
        if !(self.p > 0.0) || !self.p.is_finite() {
            return Err(invalid(format!("p must lie in (0, inf), got {}", self.p)));
        }
        if let Exponent::Finite(q) = self.q {
            if !(q > 0.0) || !q.is_finite() {
                return Err(invalid(format!("q must be positive, got {q}")));
            }
        }
        if let Some(r) = self.r {
            if !(r > 0.0 && r < self.p.min(self.q.value())) {
                return Err(invalid(format!("r must lie in (0, min(p, q)), got {r}")));
            }
        }
        Ok(())
    }

    /// `r` if set, otherwise `min(p, q) / 2`.
    pub fn r_or_default(&self) -> f64 {
        self.r.unwrap_or(self.p.min(self.q.value()) / 2.0)
    }

    pub fn describe(&self) -> String {
        let mut out = format!("s={} p={} q={}", self.s, self.p, self.q);
        if let Some(r) = self.r {
            out.push_str(&format!(" r={r}"));
        }
        out
    }
}

/// Per-scale nonnegative functions `(g_k)` for `k` in `k_min..=k_max`, each
/// defined on every point of the parent space. Scales outside the stored
/// range are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientSequence {
    pub k_min: i32,
    pub s: f64,
    scales: Vec<Vec<f64>>,
    n_points: usize,
}

impl GradientSequence {
    pub fn new(k_min: i32, s: f64, scales: Vec<Vec<f64>>, n_points: usize) -> Result<Self> {
        if scales.iter().any(|g| g.len() != n_points) {
            return Err(invalid("every scale must have one value per point"));
        }
        if scales
            .iter()
            .flatten()
            .any(|v| !(*v >= 0.0) || !v.is_finite())
        {
            return Err(invalid("gradient values must be finite and nonnegative"));
        }
        Ok(Self {
            k_min,
            s,
            scales,
            n_points,
        })
    }

    pub fn zeros(k_min: i32, k_max: i32, s: f64, n_points: usize) -> Self {
        let count = (k_max - k_min + 1).max(0) as usize;
        Self {
            k_min,
            s,
            scales: vec![vec![0.0; n_points]; count],
            n_points,
        }
    }

    pub fn k_max(&self) -> i32 {
        self.k_min + self.scales.len() as i32 - 1
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn num_scales(&self) -> usize {
        self.scales.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scales.is_empty()
    }

    pub fn ks(&self) -> std::ops::RangeInclusive<i32> {
        self.k_min..=self.k_max()
    }

    pub fn scale(&self, k: i32) -> Option<&[f64]> {
        let idx = k - self.k_min;
        if idx < 0 {
            return None;
        }
        self.scales.get(idx as usize).map(|v| v.as_slice())
    }

    pub(crate) fn scale_mut(&mut self, k: i32) -> &mut [f64] {
        let idx = (k - self.k_min) as usize;
        &mut self.scales[idx]
    }

    /// `g_k(x)`, zero outside the stored range.
    #[inline]
    pub fn value(&self, k: i32, x: usize) -> f64 {
        self.scale(k).map_or(0.0, |g| g[x])
    }

    pub fn scales(&self) -> &[Vec<f64>] {
        &self.scales
    }
}

/// Scale index `k` with `2^{-k-1} <= d < 2^{-k}`.
pub fn annulus_index(d: f64) -> i32 {
    let mut k = -(d.log2().floor() as i32) - 1;
    while 2f64.powi(-k - 1) > d {
        k += 1;
    }
    while d >= 2f64.powi(-k) {
        k -= 1;
    }
    k
}

/// Smallest and largest scale whose annulus contains a pair of points.
pub fn dyadic_range(space: &MetricMeasureSpace) -> Result<(i32, i32)> {
    if space.len() < 2 {
        return Err(Error::InvalidSpace(
            "dyadic range needs at least two points".into(),
        ));
    }
    Ok((
        annulus_index(space.diameter()),
        annulus_index(space.min_distance()),
    ))
}

/// Scale range spanned by the pairs of `set`, or `None` with fewer than two members.
fn set_range(space: &MetricMeasureSpace, set: &SubsetMask) -> Option<(i32, i32)> {
    let ids = set.ids();
    if ids.len() < 2 {
        return None;
    }
    let (lo, hi) = ids
        .par_iter()
        .enumerate()
        .map(|(a, &x)| {
            let mut lo = i32::MAX;
            let mut hi = i32::MIN;
            for &y in &ids[a + 1..] {
                let k = annulus_index(space.distance(x, y));
                lo = lo.min(k);
                hi = hi.max(k);
            }
            (lo, hi)
        })
        .reduce(|| (i32::MAX, i32::MIN), |a, b| (a.0.min(b.0), a.1.max(b.1)));
    Some((lo, hi))
}

/// `g_k(x) = max |u(x) - u(y)| d(x, y)^{-s}` over members `y` of `set` in the
/// `k`-th annulus around `x`. Values off `set` are zero.
pub fn canonical_gradient(
    u: &[f64],
    set: &SubsetMask,
    space: &MetricMeasureSpace,
    s: f64,
) -> Result<GradientSequence> {
    check_len(u, space)?;
    set.check_parent(space)?;
    let n = space.len();
    let Some((k_min, k_max)) = set_range(space, set) else {
        return Ok(GradientSequence::zeros(0, -1, s, n));
    };
    let width = (k_max - k_min + 1) as usize;
    let ids = set.ids();
    let rows: Vec<Vec<f64>> = ids
        .par_iter()
        .map(|&x| {
            let mut row = vec![0.0f64; width];
            for &y in ids {
                if y == x {
                    continue;
                }
                let d = space.distance(x, y);
                let k = annulus_index(d);
                let v = (u[x] - u[y]).abs() / d.powf(s);
                let slot = &mut row[(k - k_min) as usize];
                *slot = slot.max(v);
            }
            row
        })
        .collect();
    let mut gs = GradientSequence::zeros(k_min, k_max, s, n);
    for (row, &x) in rows.iter().zip(ids) {
        for (j, &v) in row.iter().enumerate() {
            gs.scales[j][x] = v;
        }
    }
    Ok(gs)
}

/// Outcome of a pairwise gradient check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Validity {
    /// Smallest `C` with `|f(x) - f(y)| <= C d^s (g_k(x) + g_k(y))` on pairs with a positive gradient sum.
    pub constant: f64,
    /// Pairs with zero gradient sum and a nonzero difference.
    pub violations: usize,
    pub pairs: usize,
}

impl Validity {
    pub fn holds(&self) -> bool {
        self.violations == 0 && self.constant <= 1.0
    }
}

/// Smallest validity constant of `gradient` for `f` over all pairs of
/// `region` in the annulus of some scale.
pub fn validity_constant(
    f: &[f64],
    gradient: &GradientSequence,
    region: &SubsetMask,
    space: &MetricMeasureSpace,
) -> Result<Validity> {
    check_len(f, space)?;
    region.check_parent(space)?;
    let s = gradient.s;
    let scale = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-12 * (1.0 + scale);
    let ids = region.ids();
    let (constant, violations, pairs) = ids
        .par_iter()
        .enumerate()
        .map(|(a, &x)| {
            let mut c: f64 = 0.0;
            let mut bad = 0usize;
            for &y in &ids[a + 1..] {
                let d = space.distance(x, y);
                let k = annulus_index(d);
                let diff = (f[x] - f[y]).abs();
                let g = gradient.value(k, x) + gradient.value(k, y);
                if g > 0.0 {
                    c = c.max(diff / (d.powf(s) * g));
                } else if diff > tol {
                    bad += 1;
                }
            }
            (c, bad, ids.len() - a - 1)
        })
        .reduce(|| (0.0, 0, 0), |a, b| (a.0.max(b.0), a.1 + b.1, a.2 + b.2));
    Ok(Validity {
        constant,
        violations,
        pairs,
    })
}

/// Mixed sequence norms `L^p(l^q)` and `l^q(L^p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceNorm {
    /// `|| ||(g_k(x))_k||_{l^q} ||_{L^p}` (Triebel–Lizorkin type).
    LpLq,
    /// `|| (||g_k||_{L^p})_k ||_{l^q}` (Besov type).
    LqLp,
}

pub fn sequence_norm(
    gs: &GradientSequence,
    set: &SubsetMask,
    space: &MetricMeasureSpace,
    p: f64,
    q: Exponent,
    kind: SequenceNorm,
) -> f64 {
    let ids = set.ids();
    match kind {
        SequenceNorm::LpLq => {
            let inner: Vec<f64> = ids
                .iter()
                .map(|&x| q.combine(gs.scales.iter().map(|g| g[x])))
                .collect();
            lp_norm(&inner, ids.iter().map(|&x| space.weight(x)), p)
        }
        SequenceNorm::LqLp => q.combine(gs.scales.iter().map(|g| {
            let vals: Vec<f64> = ids.iter().map(|&x| g[x]).collect();
            lp_norm(&vals, ids.iter().map(|&x| space.weight(x)), p)
        })),
    }
}

/// `(sum w |v|^p)^{1/p}`.
pub(crate) fn lp_norm(values: &[f64], weights: impl IntoIterator<Item = f64>, p: f64) -> f64 {
    values
        .iter()
        .zip(weights)
        .map(|(v, w)| w * v.abs().powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}

/// `||u||_{L^p(S)}`.
pub fn lp_norm_on(u: &[f64], set: &SubsetMask, space: &MetricMeasureSpace, p: f64) -> f64 {
    let vals: Vec<f64> = set.ids().iter().map(|&x| u[x]).collect();
    lp_norm(&vals, set.ids().iter().map(|&x| space.weight(x)), p)
}

/// Sequence norm of the padded gradient that keeps `g_k` for `k > 0` and
/// replaces every `k <= 0` by `2^{(k+1)s} |u|`; the infinite tail over
/// `k <= 0` is summed in closed form.
pub fn padded_sequence_norm(
    gs: &GradientSequence,
    u: &[f64],
    set: &SubsetMask,
    space: &MetricMeasureSpace,
    p: f64,
    q: Exponent,
    kind: SequenceNorm,
) -> f64 {
    let s = gs.s;
    let positive: Vec<&Vec<f64>> = gs
        .ks()
        .zip(&gs.scales)
        .filter(|(k, _)| *k > 0)
        .map(|(_, g)| g)
        .collect();
    let ids = set.ids();
    let weights = || ids.iter().map(|&x| space.weight(x));
    match (kind, q) {
        (SequenceNorm::LpLq, Exponent::Finite(qv)) => {
            let tail = 2f64.powf(s * qv) / (1.0 - 2f64.powf(-s * qv));
            let inner: Vec<f64> = ids
                .iter()
                .map(|&x| {
                    let head: f64 = positive.iter().map(|g| g[x].powf(qv)).sum();
                    (head + tail * u[x].abs().powf(qv)).powf(1.0 / qv)
                })
                .collect();
            lp_norm(&inner, weights(), p)
        }
        (SequenceNorm::LpLq, Exponent::Infinite) => {
            let inner: Vec<f64> = ids
                .iter()
                .map(|&x| {
                    positive
                        .iter()
                        .map(|g| g[x])
                        .fold(2f64.powf(s) * u[x].abs(), f64::max)
                })
                .collect();
            lp_norm(&inner, weights(), p)
        }
        (SequenceNorm::LqLp, _) => {
            let lp_u = lp_norm_on(u, set, space, p);
            let heads = positive.iter().map(|g| {
                let vals: Vec<f64> = ids.iter().map(|&x| g[x]).collect();
                lp_norm(&vals, weights(), p)
            });
            match q {
                Exponent::Finite(qv) => {
                    let tail = 2f64.powf(s * qv) / (1.0 - 2f64.powf(-s * qv));
                    let head: f64 = heads.map(|v| v.powf(qv)).sum();
                    (head + tail * lp_u.powf(qv)).powf(1.0 / qv)
                }
                Exponent::Infinite => heads.fold(2f64.powf(s) * lp_u, f64::max),
            }
        }
    }
}

/// Options for [`hajlasz_norms`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HajlaszOptions {
    /// Also solve the convex programs when the instance allows it.
    pub oracle: bool,
    /// Also report the positive-index padded norms.
    pub padded: bool,
}

impl Default for HajlaszOptions {
    fn default() -> Self {
        Self {
            oracle: true,
            padded: true,
        }
    }
}

/// `L^p` norm, canonical-gradient upper bounds for the Hajłasz–Triebel–Lizorkin
/// (`m_*`) and Hajłasz–Besov (`n_*`) norms, and exact infima where the
/// convex oracle applies.
pub fn hajlasz_norms(
    u: &[f64],
    set: &SubsetMask,
    space: &MetricMeasureSpace,
    params: &SmoothnessParams,
    options: HajlaszOptions,
) -> Result<NormReport> {
    params.validate()?;
    let gs = canonical_gradient(u, set, space, params.s)?;
    let lp = lp_norm_on(u, set, space, params.p);
    let m = sequence_norm(&gs, set, space, params.p, params.q, SequenceNorm::LpLq);
    let n = sequence_norm(&gs, set, space, params.p, params.q, SequenceNorm::LqLp);
    let mut report = NormReport::new(*params, space, (gs.k_min, gs.k_max()));
    report.insert("lp", lp);
    report.insert("m_hom_canonical", m);
    report.insert("n_hom_canonical", n);
    report.insert("m_canonical", lp + m);
    report.insert("n_canonical", lp + n);
    if options.padded {
        let mp = padded_sequence_norm(&gs, u, set, space, params.p, params.q, SequenceNorm::LpLq);
        let np = padded_sequence_norm(&gs, u, set, space, params.p, params.q, SequenceNorm::LqLp);
        report.insert("m_padded", lp + mp);
        report.insert("n_padded", lp + np);
    }
    if options.oracle && set.count() <= ORACLE_CAP && params.p >= 1.0 {
        let q_ok = params.q.is_infinite() || params.q == Exponent::Finite(params.p);
        if q_ok {
            let (mo, _) = infimum_gradient(u, set, space, params, OracleKind::TriebelLizorkin)?;
            let (no, _) = infimum_gradient(u, set, space, params, OracleKind::Besov)?;
            report.insert("m_hom_oracle", mo);
            report.insert("n_hom_oracle", no);
        }
        let (so, _) = infimum_gradient(u, set, space, params, OracleKind::HajlaszSp)?;
        report.insert("msp_hom_oracle", so);
    }
    Ok(report)
}

pub(crate) fn check_len(u: &[f64], space: &MetricMeasureSpace) -> Result<()> {
    if u.len() != space.len() {
        return Err(Error::LengthMismatch {
            expected: space.len(),
            got: u.len(),
        });
    }
    Ok(())
}

/// Scales `t` with log-trapezoid weights approximating `int dt / t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleGrid {
    pub t: Vec<f64>,
    pub weights: Vec<f64>,
}

impl ScaleGrid {
    /// Sorted distinct positive scales; a single scale gets weight `ln 2`.
    pub fn new(mut t: Vec<f64>) -> Result<Self> {
        if t.is_empty() || t.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(invalid("scale grid needs positive finite scales"));
        }
        t.sort_by(f64::total_cmp);
        t.dedup();
        let n = t.len();
        let logs: Vec<f64> = t.iter().map(|v| v.ln()).collect();
        let weights = if n == 1 {
            vec![std::f64::consts::LN_2]
        } else {
            (0..n)
                .map(|i| {
                    let left = if i > 0 { logs[i] - logs[i - 1] } else { 0.0 };
                    let right = if i + 1 < n {
                        logs[i + 1] - logs[i]
                    } else {
                        0.0
                    };
                    (left + right) / 2.0
                })
                .collect()
        };
        Ok(Self { t, weights })
    }

    /// `t = 2^{-j}` for `j` in `j_lo..=j_hi`.
    pub fn dyadic(j_lo: i32, j_hi: i32) -> Result<Self> {
        if j_hi < j_lo {
            return Err(invalid("empty dyadic range"));
        }
        Self::new((j_lo..=j_hi).map(|j| 2f64.powi(-j)).collect())
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// `(sum w_i (t_i^{-s} m_i)^q)^{1/q}`, or the sup for `q = inf`.
    pub fn integrate(&self, values: &[f64], s: f64, q: Exponent) -> f64 {
        q.combine_weighted(
            self.t
                .iter()
                .zip(values)
                .zip(&self.weights)
                .map(|((t, m), w)| (t.powf(-s) * m, *w)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{Bbox, Region};

    #[test]
    fn annulus_boundaries() {
        assert_eq!(annulus_index(1.0), -1);
        assert_eq!(annulus_index(0.5), 0);
        assert_eq!(annulus_index(0.6), 0);
        assert_eq!(annulus_index(0.25), 1);
        assert_eq!(annulus_index(3.0), -2);
    }

    #[test]
    fn dyadic_range_of_three_point_line() {
        let s =
            MetricMeasureSpace::build_grid(&Region::Full, 0.5, &Bbox::cube(0.0, 1.0, 1)).unwrap();
        assert_eq!(dyadic_range(&s).unwrap(), (-1, 0));
        let two = MetricMeasureSpace::from_cloud(&[vec![0.0], vec![1.0]], &[1.0, 1.0]).unwrap();
        assert_eq!(dyadic_range(&two).unwrap(), (-1, -1));
        let one = MetricMeasureSpace::from_cloud(&[vec![0.0]], &[1.0]).unwrap();
        assert!(dyadic_range(&one).is_err());
    }

    #[test]
    fn two_point_canonical_gradient() {
        let space = MetricMeasureSpace::from_cloud(&[vec![0.0], vec![0.6]], &[1.0, 1.0]).unwrap();
        let set = SubsetMask::full(2);
        let gs = canonical_gradient(&[0.0, 1.0], &set, &space, 0.5).unwrap();
        assert_eq!((gs.k_min, gs.k_max()), (0, 0));
        let expected = 1.0 / 0.6f64.sqrt();
        assert!((gs.value(0, 0) - expected).abs() < 1e-15);
        assert!((gs.value(0, 1) - expected).abs() < 1e-15);
        let v = validity_constant(&[0.0, 1.0], &gs, &set, &space).unwrap();
        assert!(v.holds());
    }

    #[test]
    fn two_scale_sequence_norms() {
        let space = MetricMeasureSpace::from_cloud(&[vec![0.0]], &[1.0]).unwrap();
        let gs = GradientSequence::new(0, 0.5, vec![vec![3.0], vec![4.0]], 1).unwrap();
        let set = SubsetMask::full(1);
        for kind in [SequenceNorm::LpLq, SequenceNorm::LqLp] {
            let v = sequence_norm(&gs, &set, &space, 2.0, Exponent::Finite(2.0), kind);
            assert!((v - 5.0).abs() < 1e-12);
            let v = sequence_norm(&gs, &set, &space, 2.0, Exponent::Infinite, kind);
            assert_eq!(v, 4.0);
        }
    }

    #[test]
    fn exponent_json() {
        let e: Exponent = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(e, Exponent::Infinite);
        let e: Exponent = serde_json::from_str("2.5").unwrap();
        assert_eq!(e, Exponent::Finite(2.5));
        assert_eq!(
            serde_json::to_string(&Exponent::Infinite).unwrap(),
            "\"inf\""
        );
    }

    #[test]
    fn params_reject_bad_r() {
        let p = SmoothnessParams::new(0.5, 2.0, Exponent::Finite(2.0)).unwrap();
        assert!(p.with_r(2.0).is_err());
        assert!(p.with_r(1.0).is_ok());
    }
}
