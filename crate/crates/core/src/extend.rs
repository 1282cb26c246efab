//! Whitney extension by medians (or averages), its explicit fractional
//! gradient, and the Lipschitz cutoff that localizes it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cover::{partition_of_unity, whitney_cover_with, PartitionOfUnity, WhitneyCover};
use crate::error::{invalid, Error, Result};
use crate::median::median_of;
use crate::norms::{
    canonical_gradient, dyadic_range, lp_norm_on, maximal_functions, sequence_norm,
    validity_constant, Exponent, GradientSequence, SequenceNorm, Validity,
};
use crate::space::{MetricMeasureSpace, SubsetMask};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionMethod {
    /// Medians over reflected balls; works for every `p > 0`, not linear.
    Median,
    /// Integral averages over reflected balls; linear in `u`.
    Average,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtensionParams {
    pub s: f64,
    pub p: f64,
    pub q: Exponent,
    /// Decay rate for coarser scales, in `(0, 1 - s)`.
    pub delta: f64,
    /// Decay rate for finer scales, in `(0, s)`.
    pub eps_prime: f64,
    /// Maximal-function exponent, in `(0, min(p, q))`.
    pub t_inner: f64,
    pub method: ExtensionMethod,
    /// Radius of the neighborhood `V = { dist(., S) < v_radius }`.
    pub v_radius: f64,
    /// Whitney balls with radius below this value carry the extension.
    pub small_threshold: f64,
    /// The cutoff equals 1 up to this distance from `S` ...
    pub cutoff_inner: f64,
    /// ... and vanishes from this distance on.
    pub cutoff_outer: f64,
}

impl ExtensionParams {
    /// Midpoints of the admissible intervals for `delta`, `eps_prime` and
    /// `t_inner`; neighborhood radius 8 with a cutoff falling from 1 to 0
    /// between distances 4 and 8.
    pub fn defaults(s: f64, p: f64, q: Exponent) -> Self {
        Self {
            s,
            p,
            q,
            delta: (1.0 - s) / 2.0,
            eps_prime: s / 2.0,
            t_inner: p.min(q.value()) / 2.0,
            method: ExtensionMethod::Median,
            v_radius: 8.0,
            small_threshold: 1.0,
            cutoff_inner: 4.0,
            cutoff_outer: 8.0,
        }
    }

    pub fn with_method(mut self, method: ExtensionMethod) -> Self {
        self.method = method;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(invalid(what.to_string()))
            }
        };
        check(self.s > 0.0 && self.s < 1.0, "s must lie in (0, 1)")?;
        check(self.p > 0.0 && self.p.is_finite(), "p must lie in (0, inf)")?;
        check(self.q.value() > 0.0, "q must be positive")?;
        check(
            self.delta > 0.0 && self.delta < 1.0 - self.s,
            "delta must lie in (0, 1 - s)",
        )?;
        check(
            self.eps_prime > 0.0 && self.eps_prime < self.s,
            "eps_prime must lie in (0, s)",
        )?;
        check(
            self.t_inner > 0.0 && self.t_inner < self.p.min(self.q.value()),
            "t_inner must lie in (0, min(p, q))",
        )?;
        check(
            self.cutoff_inner > 0.0 && self.cutoff_inner < self.cutoff_outer,
            "cutoff needs 0 < inner < outer",
        )?;
        check(
            self.cutoff_outer <= self.v_radius,
            "cutoff must vanish inside V",
        )?;
        check(
            self.small_threshold > 0.0,
            "small-ball threshold must be positive",
        )?;
        Ok(())
    }
}

/// Lipschitz cutoff `Psi = clamp((outer - dist(x, S)) / (outer - inner), 0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cutoff {
    pub psi: Vec<f64>,
    /// Lipschitz constant `1 / (outer - inner)`.
    pub lipschitz: f64,
    /// Integer with `2^{k_L - 1} < L <= 2^{k_L}`.
    pub k_l: i32,
}

pub fn cutoff_from_distance(dist: &[f64], inner: f64, outer: f64) -> Cutoff {
    let width = outer - inner;
    let lipschitz = 1.0 / width;
    let psi = dist
        .iter()
        .map(|d| ((outer - d) / width).clamp(0.0, 1.0))
        .collect();
    Cutoff {
        psi,
        lipschitz,
        k_l: lipschitz_scale(lipschitz),
    }
}

pub fn cutoff(
    space: &MetricMeasureSpace,
    set: &SubsetMask,
    inner: f64,
    outer: f64,
) -> Result<Cutoff> {
    set.check_parent(space)?;
    if set.is_empty() {
        return Err(invalid("cutoff needs a nonempty set"));
    }
    Ok(cutoff_from_distance(
        &space.distance_to_set(set),
        inner,
        outer,
    ))
}

/// `k` with `2^{k-1} < l <= 2^k`.
pub fn lipschitz_scale(l: f64) -> i32 {
    let mut k = l.log2().ceil() as i32;
    while 2f64.powi(k) < l {
        k += 1;
    }
    while 2f64.powi(k - 1) >= l {
        k -= 1;
    }
    k
}

/// Values of `u` aggregated over each small reflected ball `B(x_i^*, r_i) ∩ S`
/// (`None` for balls that are not small).
fn reflected_values(
    u: &[f64],
    set: &SubsetMask,
    space: &MetricMeasureSpace,
    cover: &WhitneyCover,
    method: ExtensionMethod,
) -> Result<Vec<Option<f64>>> {
    let mut is_small = vec![false; cover.len()];
    for &i in &cover.small {
        is_small[i] = true;
    }
    (0..cover.len())
        .into_par_iter()
        .map(|i| {
            if !is_small[i] {
                return Ok(None);
            }
            let mut values = Vec::new();
            let mut weights = Vec::new();
            for y in space.ball(cover.reflected[i], cover.radii[i]) {
                if set.contains(y) {
                    values.push(u[y]);
                    weights.push(space.weight(y));
                }
            }
            if values.is_empty() {
                return Err(Error::Invariant(format!("reflected ball {i} misses S")));
            }
            Ok(Some(match method {
                ExtensionMethod::Median => median_of(&values, &weights),
                ExtensionMethod::Average => {
                    let total: f64 = weights.iter().sum();
                    values.iter().zip(&weights).map(|(v, w)| v * w).sum::<f64>() / total
                }
            }))
        })
        .collect()
}

/// `u` on `S`; elsewhere `sum_{i small} phi_i(x) m_i` with `m_i` the median
/// (or average) of `u` over `B(x_i^*, r_i) ∩ S`.
pub fn local_extend(
    u: &[f64],
    set: &SubsetMask,
    space: &MetricMeasureSpace,
    cover: &WhitneyCover,
    pou: &PartitionOfUnity,
    method: ExtensionMethod,
) -> Result<Vec<f64>> {
    crate::norms::check_len(u, space)?;
    set.check_parent(space)?;
    let m = reflected_values(u, set, space, cover, method)?;
    Ok((0..space.len())
        .map(|x| {
            if set.contains(x) {
                u[x]
            } else {
                pou.row(x)
                    .iter()
                    .filter_map(|&(i, phi)| m[i].map(|v| phi * v))
                    .sum()
            }
        })
        .collect())
}

/// `g~_k = sum_{j < k} 2^{(j-k) delta} G_j + sum_{j >= k-6} 2^{(k-j)(s - eps')} G_j`
/// with `G_j = (M g_j^t)^{1/t}`, for `k` in `k_range`.
pub fn extension_gradient(
    gs: &GradientSequence,
    space: &MetricMeasureSpace,
    params: &ExtensionParams,
    k_range: (i32, i32),
) -> Result<GradientSequence> {
    params.validate()?;
    let n = space.len();
    if gs.n_points() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: gs.n_points(),
        });
    }
    let t = params.t_inner;
    let powered: Vec<Vec<f64>> = gs
        .scales()
        .iter()
        .map(|g| g.iter().map(|v| v.powf(t)).collect())
        .collect();
    let refs: Vec<&[f64]> = powered.iter().map(|v| v.as_slice()).collect();
    let big: Vec<Vec<f64>> = maximal_functions(&refs, space)
        .into_iter()
        .map(|m| m.into_iter().map(|v| v.powf(1.0 / t)).collect())
        .collect();
    let (k_lo, k_hi) = k_range;
    let mut out = GradientSequence::zeros(k_lo, k_hi, params.s, n);
    let fine = params.s - params.eps_prime;
    for k in k_lo..=k_hi {
        let coarse: Vec<(f64, &Vec<f64>)> = gs
            .ks()
            .zip(&big)
            .filter(|(j, _)| *j < k)
            .map(|(j, g)| (2f64.powf(f64::from(j - k) * params.delta), g))
            .collect();
        let finer: Vec<(f64, &Vec<f64>)> = gs
            .ks()
            .zip(&big)
            .filter(|(j, _)| *j >= k - 6)
            .map(|(j, g)| (2f64.powf(f64::from(k - j) * fine), g))
            .collect();
        let slot = out.scale_mut(k);
        for (x, v) in slot.iter_mut().enumerate() {
            let a: f64 = coarse.iter().map(|(c, g)| c * g[x]).sum();
            let b: f64 = finer.iter().map(|(c, g)| c * g[x]).sum();
            *v = a + b;
        }
    }
    Ok(out)
}

/// `Eu = Psi * E~u` and its gradient
/// `g'_k = (g~_k + 2^{sk+2} |E~u|) 1_{Psi > 0}` for `k < k_L`,
/// `g'_k = (g~_k + 2^{k(s-1)} L |E~u|) 1_{Psi > 0}` for `k >= k_L`.
pub fn combine_cutoff(
    etilde: &[f64],
    gradient: &GradientSequence,
    cut: &Cutoff,
    s: f64,
) -> (Vec<f64>, GradientSequence) {
    let eu: Vec<f64> = etilde.iter().zip(&cut.psi).map(|(e, p)| p * e).collect();
    let mut out = gradient.clone();
    for k in gradient.ks() {
        let factor = if k < cut.k_l {
            2f64.powf(s * f64::from(k) + 2.0)
        } else {
            2f64.powf(f64::from(k) * (s - 1.0)) * cut.lipschitz
        };
        let slot = out.scale_mut(k);
        for (x, v) in slot.iter_mut().enumerate() {
            *v = if cut.psi[x] > 0.0 {
                *v + factor * etilde[x].abs()
            } else {
                0.0
            };
        }
    }
    (eu, out)
}

/// Everything produced by [`extend`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtensionResult {
    pub eu: Vec<f64>,
    pub etilde: Vec<f64>,
    pub psi: Vec<f64>,
    /// Gradient of `u` on `S` the construction started from.
    pub source_gradient: GradientSequence,
    /// `(g~_k)` for the local extension.
    pub gradient: GradientSequence,
    /// `(g'_k)` for the final extension.
    pub final_gradient: GradientSequence,
    /// Membership in `V`.
    pub in_v: Vec<bool>,
    /// Points of `X \ V`; nonzero means the complement is not reached by `V`.
    pub outside_v: usize,
    /// Validity of `(E~u, g~)` on `V`.
    pub local_validity: Validity,
    /// Validity of `(Eu, g')` on the whole space.
    pub final_validity: Validity,
    pub cover: WhitneyCover,
}

impl ExtensionResult {
    pub fn v_mask(&self) -> SubsetMask {
        SubsetMask::from_members(self.in_v.clone())
    }

    /// Smallest constant making `g~` a fractional gradient of `E~u` on `V`.
    pub fn empirical_c(&self) -> f64 {
        self.local_validity.constant
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// Full pipeline with the canonical gradient of `u` on `S`.
pub fn extend(
    u: &[f64],
    set: &SubsetMask,
    space: &MetricMeasureSpace,
    params: &ExtensionParams,
) -> Result<ExtensionResult> {
    params.validate()?;
    let cover = whitney_cover_with(space, set, params.small_threshold)?;
    let pou = partition_of_unity(&cover, space, set)?;
    let gs = canonical_gradient(u, set, space, params.s)?;
    extend_with(u, set, space, params, cover, &pou, gs)
}

/// Pipeline with a prebuilt cover and partition and a supplied gradient of `u` on `S`.
pub fn extend_with(
    u: &[f64],
    set: &SubsetMask,
    space: &MetricMeasureSpace,
    params: &ExtensionParams,
    cover: WhitneyCover,
    pou: &PartitionOfUnity,
    source_gradient: GradientSequence,
) -> Result<ExtensionResult> {
    params.validate()?;
    let etilde = local_extend(u, set, space, &cover, pou, params.method)?;
    let gradient = extension_gradient(&source_gradient, space, params, dyadic_range(space)?)?;
    let dist = cover.dist_to_set();
    let cut = cutoff_from_distance(dist, params.cutoff_inner, params.cutoff_outer);
    let (eu, final_gradient) = combine_cutoff(&etilde, &gradient, &cut, params.s);
    let in_v: Vec<bool> = dist.iter().map(|&d| d < params.v_radius).collect();
    let outside_v = in_v.iter().filter(|v| !**v).count();
    let v = SubsetMask::from_members(in_v.clone());
    let local_validity = validity_constant(&etilde, &gradient, &v, space)?;
    let final_validity =
        validity_constant(&eu, &final_gradient, &SubsetMask::full(space.len()), space)?;
    Ok(ExtensionResult {
        eu,
        etilde,
        psi: cut.psi,
        source_gradient,
        gradient,
        final_gradient,
        in_v,
        outside_v,
        local_validity,
        final_validity,
        cover,
    })
}

/// Norm ratios comparing the extension with the input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtensionRatios {
    /// `||E~u||_{L^p(V)} / ||u||_{L^p(S)}`.
    pub lp: f64,
    /// `||g~||_{L^p(V, l^q)} / ||g||_{L^p(S, l^q)}`.
    pub tl_gradient: f64,
    /// `||g~||_{l^q(L^p(V))} / ||g||_{l^q(L^p(S))}`.
    pub besov_gradient: f64,
    /// `||Eu||_{N(X)} / ||u||_{N(S)}` with canonical-gradient upper bounds.
    pub besov_norm: f64,
}

pub fn extension_ratios(
    result: &ExtensionResult,
    u: &[f64],
    set: &SubsetMask,
    space: &MetricMeasureSpace,
    params: &ExtensionParams,
) -> Result<ExtensionRatios> {
    let (p, q) = (params.p, params.q);
    let v = result.v_mask();
    let full = SubsetMask::full(space.len());
    let ratio = |a: f64, b: f64| {
        if b > 0.0 {
            a / b
        } else if a > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    };
    let src = &result.source_gradient;
    let tl = ratio(
        sequence_norm(&result.gradient, &v, space, p, q, SequenceNorm::LpLq),
        sequence_norm(src, set, space, p, q, SequenceNorm::LpLq),
    );
    let besov = ratio(
        sequence_norm(&result.gradient, &v, space, p, q, SequenceNorm::LqLp),
        sequence_norm(src, set, space, p, q, SequenceNorm::LqLp),
    );
    let lp_u = lp_norm_on(u, set, space, p);
    let lp = ratio(lp_norm_on(&result.etilde, &v, space, p), lp_u);
    let eu_grad = canonical_gradient(&result.eu, &full, space, params.s)?;
    let n_eu = lp_norm_on(&result.eu, &full, space, p)
        + sequence_norm(&eu_grad, &full, space, p, q, SequenceNorm::LqLp);
    let n_u = lp_u + sequence_norm(src, set, space, p, q, SequenceNorm::LqLp);
    Ok(ExtensionRatios {
        lp,
        tl_gradient: tl,
        besov_gradient: besov,
        besov_norm: ratio(n_eu, n_u),
    })
}
