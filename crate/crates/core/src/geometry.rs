//! Measure density checks and generators for regular and non-regular domains.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::space::{Bbox, MetricMeasureSpace, Region, SubsetMask};

/// Minimum number of sampled radii per decade.
pub const MIN_RADII_PER_DECADE: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    /// `worst_ratio >= c_m_threshold`.
    pub passed: bool,
    /// Smallest `mu(S ∩ B(x, r)) / mu(B(x, r))` over tested pairs (1 if none).
    pub worst_ratio: f64,
    /// `(center, radius)` attaining the worst ratio.
    pub witness: Option<(usize, f64)>,
    pub c_m_threshold: f64,
    pub radius_range: (f64, f64),
    pub radii_sampled: usize,
    pub centers_tested: usize,
    pub pairs_tested: usize,
}

impl DensityReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// `n` radii spaced evenly in `log r` over `[r_min, r_max]`, with at least
/// `per_decade` per factor of ten.
pub fn log_uniform_radii(r_min: f64, r_max: f64, per_decade: usize) -> Result<Vec<f64>> {
    if !(r_min > 0.0) || !(r_max >= r_min) {
        return Err(invalid("need 0 < r_min <= r_max"));
    }
    if per_decade < MIN_RADII_PER_DECADE {
        return Err(invalid(format!(
            "need at least {MIN_RADII_PER_DECADE} radii per decade"
        )));
    }
    let decades = (r_max / r_min).log10();
    let n = ((decades * per_decade as f64).ceil() as usize).max(1) + 1;
    let (a, b) = (r_min.ln(), r_max.ln());
    let mut out: Vec<f64> = (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect();
    out[0] = r_min;
    out[n - 1] = r_max;
    out.dedup();
    Ok(out)
}

/// Scans `mu(S ∩ B(x, r)) / mu(B(x, r))` over centers `x ∈ S` and radii `r`,
/// with balls taken in the ambient space.
///
/// On grids the ambient space stands in for `R^n`, so a pair is tested only
/// when the ball stays inside the bounding box: `r <= dist(x, boundary)`.
/// Radii must lie in `(2h, 1]` for grid spacing `h`.
pub fn check_measure_density(
    space: &MetricMeasureSpace,
    set: &SubsetMask,
    c_m: f64,
    radii: &[f64],
) -> Result<DensityReport> {
    set.check_parent(space)?;
    if !(c_m > 0.0 && c_m <= 1.0) {
        return Err(invalid("c_m must lie in (0, 1]"));
    }
    if radii.is_empty() {
        return Err(invalid("no radii sampled"));
    }
    let h = space.spacing();
    for &r in radii {
        if !(r > 2.0 * h) || r > 1.0 {
            return Err(invalid(format!(
                "radius {r} outside (2h, 1] = ({}, 1]",
                2.0 * h
            )));
        }
    }
    let mut radii = radii.to_vec();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    let r_max = radii[radii.len() - 1];
    let grid = space.grid();

    // (worst ratio, radius, pairs) per center
    let per_center: Vec<(usize, f64, f64, usize)> = set
        .ids()
        .par_iter()
        .map(|&x| {
            let reach = match grid {
                Some(g) => g.bbox.distance_to_boundary(space.coords(x).unwrap_or(&[])),
                None => f64::INFINITY,
            };
            let mut ball: Vec<(f64, usize)> = Vec::new();
            space.for_each_in_ball(x, r_max, |y, d| ball.push((d, y)));
            ball.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut all = Vec::with_capacity(ball.len());
            let mut inside = Vec::with_capacity(ball.len());
            let (mut a, mut b) = (0.0, 0.0);
            for &(_, y) in &ball {
                a += space.weight(y);
                if set.contains(y) {
                    b += space.weight(y);
                }
                all.push(a);
                inside.push(b);
            }
            let mut worst = (f64::INFINITY, 0.0);
            let mut pairs = 0;
            for &r in radii.iter().filter(|&&r| r <= reach) {
                let m = ball.partition_point(|e| e.0 < r);
                let ratio = inside[m - 1] / all[m - 1];
                pairs += 1;
                if ratio < worst.0 {
                    worst = (ratio, r);
                }
            }
            (x, worst.0, worst.1, pairs)
        })
        .collect();

    let mut worst_ratio = 1.0;
    let mut witness = None;
    let mut pairs_tested = 0;
    let mut centers_tested = 0;
    for &(x, ratio, r, pairs) in &per_center {
        if pairs == 0 {
            continue;
        }
        centers_tested += 1;
        pairs_tested += pairs;
        if witness.is_none() || ratio < worst_ratio {
            worst_ratio = ratio;
            witness = Some((x, r));
        }
    }
    Ok(DensityReport {
        passed: worst_ratio >= c_m,
        worst_ratio,
        witness,
        c_m_threshold: c_m,
        radius_range: (radii[0], r_max),
        radii_sampled: radii.len(),
        centers_tested,
        pairs_tested,
    })
}

/// `mu(S ∩ B(x, r)) / mu(B(x, r))` for a single center and radius.
pub fn density_ratio(space: &MetricMeasureSpace, set: &SubsetMask, x: usize, r: f64) -> f64 {
    let (mut inside, mut all) = (0.0, 0.0);
    space.for_each_in_ball(x, r, |y, _| {
        all += space.weight(y);
        if set.contains(y) {
            inside += space.weight(y);
        }
    });
    inside / all
}

/// Grids `region` at spacing `h` inside its box `region_box` padded by 1 on
/// every side, then checks density of the region in that ambient grid.
pub fn check_region_density(
    region: &Region,
    region_box: &Bbox,
    h: f64,
    c_m: f64,
    radii: &[f64],
) -> Result<DensityReport> {
    let lo: Vec<f64> = region_box.lo.iter().map(|v| v - 1.0).collect();
    let hi: Vec<f64> = region_box.hi.iter().map(|v| v + 1.0).collect();
    let space = MetricMeasureSpace::build_grid(&Region::Full, h, &Bbox::new(&lo, &hi))?;
    let set = SubsetMask::from_region(&space, region)?;
    if set.is_empty() {
        return Err(crate::Error::EmptyDomain);
    }
    check_measure_density(&space, &set, c_m, radii)
}

/// Carpet in the unit square removing a central square of relative side
/// `fractions[l]` from every active cell at level `l + 1`.
///
/// Fractions must lie in `(0, 1/3]` so removed squares of later levels never
/// meet those of earlier ones.
pub fn make_carpet(levels: usize, fractions: &[f64]) -> Result<Region> {
    if fractions.len() < levels {
        return Err(invalid(format!(
            "{levels} levels need as many fractions, got {}",
            fractions.len()
        )));
    }
    let fractions = &fractions[..levels];
    if let Some(a) = fractions.iter().find(|a| !(**a > 0.0 && **a <= 1.0 / 3.0)) {
        if *a >= 1.0 {
            return Err(invalid(format!("removal fraction {a} must be below 1")));
        }
        return Err(invalid(format!(
            "removal fraction {a} must lie in (0, 1/3]"
        )));
    }
    Ok(Region::Carpet {
        origin: [0.0, 0.0],
        side: 1.0,
        fractions: fractions.to_vec(),
    })
}

/// Area of the carpet: level `l` removes `8^{l-1}` squares of area
/// `a_l^2 9^{-(l-1)}`.
pub fn carpet_area(fractions: &[f64]) -> f64 {
    1.0 - fractions
        .iter()
        .enumerate()
        .map(|(i, a)| a * a * (8.0f64 / 9.0).powi(i as i32))
        .sum::<f64>()
}

/// `4^{-l}` for `l = 1..=levels`; the resulting carpets keep area above 0.9.
pub fn positive_measure_fractions(levels: usize) -> Vec<f64> {
    (1..=levels).map(|l| 4f64.powi(-(l as i32))).collect()
}

pub fn make_slit_disc() -> Region {
    Region::SlitDisc
}

/// `{ (x, y) : 0 < x < 1, |y| < x^beta }`; `beta = 1` is the regular wedge.
pub fn make_cusp(beta: f64) -> Result<Region> {
    if !(beta >= 1.0) || !beta.is_finite() {
        return Err(invalid(format!(
            "cusp exponent must be at least 1, got {beta}"
        )));
    }
    Ok(Region::Cusp { beta })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn radii() -> Vec<f64> {
        log_uniform_radii(0.1, 1.0, 16).unwrap()
    }

    #[test]
    fn full_space_ratio_is_one() {
        let space =
            MetricMeasureSpace::build_grid(&Region::Full, 0.04, &Bbox::cube(-1.0, 2.0, 2)).unwrap();
        let r =
            check_measure_density(&space, &SubsetMask::full(space.len()), 1.0, &radii()).unwrap();
        assert_eq!(r.worst_ratio, 1.0);
        assert!(r.passed);
        assert!(r.pairs_tested > 0);
    }

    #[test]
    fn unit_square_beats_one_fifth() {
        let sq = Region::closed_box(&[0.0, 0.0], &[1.0, 1.0]);
        let r = check_region_density(&sq, &Bbox::cube(0.0, 1.0, 2), 0.04, 0.2, &radii()).unwrap();
        assert!(r.worst_ratio >= 0.2, "{}", r.worst_ratio);
        assert!(r.worst_ratio < 0.35);
    }

    #[test]
    fn carpet_areas() {
        assert_eq!(carpet_area(&[]), 1.0);
        assert!((carpet_area(&[1.0 / 3.0]) - 8.0 / 9.0).abs() < 1e-15);
        let f = positive_measure_fractions(6);
        assert!(carpet_area(&f) > 0.9);
        assert!(make_carpet(1, &[1.0]).is_err());
        assert!(make_carpet(1, &[0.5]).is_err());
        assert_eq!(
            make_carpet(0, &[]).unwrap(),
            Region::Carpet {
                origin: [0.0, 0.0],
                side: 1.0,
                fractions: vec![]
            }
        );
    }

    #[test]
    fn slit_and_cusp_regions() {
        let s = make_slit_disc();
        assert!(s.contains(&[-0.5, 0.0]));
        assert!(!s.contains(&[0.5, 0.0]));
        assert!(make_cusp(0.5).is_err());
        assert!(make_cusp(2.0).unwrap().contains(&[0.5, 0.2]));
        assert!(!make_cusp(2.0).unwrap().contains(&[0.5, 0.3]));
    }

    #[test]
    fn radii_are_log_uniform() {
        let r = log_uniform_radii(0.01, 1.0, 16).unwrap();
        assert_eq!(r.len(), 33);
        assert!(log_uniform_radii(0.1, 1.0, 8).is_err());
    }
}
