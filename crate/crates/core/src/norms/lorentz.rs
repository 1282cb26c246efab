use super::Exponent;
use crate::error::{invalid, Result};
use crate::space::{MetricMeasureSpace, SubsetMask};

/// Lorentz quasi-norm `||u||_{L^{p,q}}` on the whole space.
pub fn lorentz_norm(u: &[f64], space: &MetricMeasureSpace, p: f64, q: Exponent) -> Result<f64> {
    lorentz_norm_on(u, &SubsetMask::full(space.len()), space, p, q)
}

/// Lorentz quasi-norm restricted to `set`.
///
/// The distribution function `t -> mu{|u| >= t}` is a step function, so for
/// `q < inf` the defining integral is summed exactly step by step:
/// with distinct levels `a_1 > ... > a_m > a_{m+1} = 0` and
/// `W_j = mu{|u| >= a_j}`,
/// `||u||^q = p * sum_j W_j^{q/p} (a_j^q - a_{j+1}^q) / q`.
/// For `q = inf` the norm is `sup_t t mu{|u| > t}^{1/p} = max_j a_j W_j^{1/p}`.
pub fn lorentz_norm_on(
    u: &[f64],
    set: &SubsetMask,
    space: &MetricMeasureSpace,
    p: f64,
    q: Exponent,
) -> Result<f64> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(invalid(format!("Lorentz p must lie in (0, inf), got {p}")));
    }
    if let Exponent::Finite(qv) = q {
        if !(qv > 0.0) {
            return Err(invalid(format!("Lorentz q must be positive, got {qv}")));
        }
    }
    let mut levels: Vec<(f64, f64)> = set
        .ids()
        .iter()
        .map(|&x| (u[x].abs(), space.weight(x)))
        .filter(|e| e.0 > 0.0)
        .collect();
    levels.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut total = 0.0;
    let mut cumulative = 0.0;
    let mut i = 0;
    while i < levels.len() {
        let a = levels[i].0;
        while i < levels.len() && levels[i].0 == a {
            cumulative += levels[i].1;
            i += 1;
        }
        let next = levels.get(i).map_or(0.0, |e| e.0);
        match q {
            Exponent::Finite(qv) => {
                total += cumulative.powf(qv / p) * (a.powf(qv) - next.powf(qv)) / qv;
            }
            Exponent::Infinite => total = f64::max(total, a * cumulative.powf(1.0 / p)),
        }
    }
    Ok(match q {
        Exponent::Finite(qv) => (p * total).powf(1.0 / qv),
        Exponent::Infinite => total,
    })
}

/// Constant `(q/p)^{1/q}` in `||u||_{L^{p,inf}} <= (q/p)^{1/q} ||u||_{L^{p,q}}`.
pub fn lorentz_nesting_factor(p: f64, q: f64) -> f64 {
    (q / p).powf(1.0 / q)
}
