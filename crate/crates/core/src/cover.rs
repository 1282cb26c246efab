//! Whitney coverings, bounded-overlap nets and their tent partitions of unity.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{MetricMeasureSpace, SubsetMask};

/// Default radius below which a Whitney ball counts as small.
pub const SMALL_BALL_THRESHOLD: f64 = 1.0;

/// Whitney covering of the complement of a set `S`.
///
/// Ball `i` is `B(x_i, r_i)` with `r_i = dist(x_i, S) / 10`; `reflected[i]`
/// is the nearest member of `S` to `x_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhitneyCover {
    pub centers: Vec<usize>,
    pub radii: Vec<f64>,
    pub reflected: Vec<usize>,
    /// Indices of balls with radius below `small_threshold`.
    pub small: Vec<usize>,
    pub small_threshold: f64,
    /// Largest number of inflated balls `5 B_i` containing one covered point.
    pub overlap_bound: usize,
    #[serde(skip)]
    dist_to_set: Vec<f64>,
}

impl WhitneyCover {
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// `dist(x, S)` for every point of the parent space.
    pub fn dist_to_set(&self) -> &[f64] {
        &self.dist_to_set
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Checks covering, disjoint fifths, ball containment and distance
    /// bounds, and the overlap bound on `space`.
    pub fn check_invariants(&self, space: &MetricMeasureSpace, set: &SubsetMask) -> Result<()> {
        let n = space.len();
        let fail = |msg: String| Err(Error::InvalidCover(msg));
        let mut covered = vec![false; n];
        let mut fifths = vec![0usize; n];
        let mut fives = vec![0usize; n];
        for (i, (&c, &r)) in self.centers.iter().zip(&self.radii).enumerate() {
            space.for_each_in_ball(c, r, |y, _| covered[y] = true);
            space.for_each_in_ball(c, r / 5.0, |y, _| fifths[y] += 1);
            let mut bad = None;
            space.for_each_in_ball(c, 5.0 * r, |y, _| {
                fives[y] += 1;
                let d = self.dist_to_set[y];
                if set.contains(y) || !(5.0 * r < d && d < 15.0 * r) {
                    bad.get_or_insert(y);
                }
            });
            if let Some(y) = bad {
                return fail(format!(
                    "point {y} in 5B_{i} violates 5r < dist(., S) < 15r"
                ));
            }
            if space.distance(c, self.reflected[i]) >= 15.0 * r || !set.contains(self.reflected[i])
            {
                return fail(format!(
                    "reflected center of ball {i} is not within 15 r_i in S"
                ));
            }
        }
        for x in 0..n {
            if set.contains(x) {
                continue;
            }
            if !covered[x] {
                return fail(format!("point {x} is not covered"));
            }
            if fifths[x] > 1 {
                return fail(format!("fifth balls overlap at point {x}"));
            }
            if fives[x] > self.overlap_bound {
                return fail(format!("overlap {} exceeds bound at point {x}", fives[x]));
            }
        }
        Ok(())
    }

    /// Checks `r_i / 3 <= r_j <= 3 r_i` whenever `5B_i` and `5B_j` share a point.
    pub fn check_neighbor_comparability(&self, space: &MetricMeasureSpace) -> Result<()> {
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); space.len()];
        for (i, (&c, &r)) in self.centers.iter().zip(&self.radii).enumerate() {
            space.for_each_in_ball(c, 5.0 * r, |y, _| members[y].push(i));
        }
        for ids in &members {
            for &i in ids {
                for &j in ids {
                    let (ri, rj) = (self.radii[i], self.radii[j]);
                    if rj < ri / 3.0 || rj > 3.0 * ri {
                        return Err(Error::InvalidCover(format!(
                            "balls {i} and {j} are neighbors with radii {ri} and {rj}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `dist / 10`, nudged down so that `5 r <= dist / 2` also holds after rounding.
fn whitney_radius(dist: f64) -> f64 {
    let mut r = dist / 10.0;
    while 5.0 * r > dist / 2.0 {
        r = r.next_down();
    }
    r
}

/// Whitney cover of `X \ S` with the default small-ball threshold.
pub fn whitney_cover(space: &MetricMeasureSpace, set: &SubsetMask) -> Result<WhitneyCover> {
    whitney_cover_with(space, set, SMALL_BALL_THRESHOLD)
}

/// Greedy Whitney cover: complement points are visited by decreasing
/// `dist(x, S)` (ties by id) and accepted when their fifth ball is disjoint
/// from every accepted fifth ball.
pub fn whitney_cover_with(
    space: &MetricMeasureSpace,
    set: &SubsetMask,
    small_threshold: f64,
) -> Result<WhitneyCover> {
    set.check_parent(space)?;
    if set.is_empty() {
        return Err(Error::InvalidCover("set S is empty".into()));
    }
    if set.count() == space.len() {
        return Err(Error::InvalidCover("complement of S is empty".into()));
    }
    let dist = space.distance_to_set(set);
    let mut order: Vec<usize> = (0..space.len()).filter(|&x| !set.contains(x)).collect();
    order.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]).then(a.cmp(&b)));

    let mut centers: Vec<usize> = Vec::new();
    let mut radii: Vec<f64> = Vec::new();
    // A new center blocks every later point y with d < (r + r_y) / 5. Later
    // points have r_y <= r, so the search stays inside B(x, 2r/5).
    let mut blocked = vec![false; space.len()];
    for &x in &order {
        if blocked[x] {
            continue;
        }
        let r = whitney_radius(dist[x]);
        space.for_each_in_ball(x, 2.0 * r / 5.0, |y, d| {
            if d < (r + whitney_radius(dist[y])) / 5.0 {
                blocked[y] = true;
            }
        });
        centers.push(x);
        radii.push(r);
    }

    let reflected: Vec<usize> = centers
        .iter()
        .map(|&c| space.nearest_in(c, set).map(|(y, _)| y).unwrap())
        .collect();
    let small = (0..centers.len())
        .filter(|&i| radii[i] < small_threshold)
        .collect();
    let mut count = vec![0usize; space.len()];
    for (&c, &r) in centers.iter().zip(&radii) {
        space.for_each_in_ball(c, 5.0 * r, |y, _| count[y] += 1);
    }
    let overlap_bound = count.into_iter().max().unwrap_or(0).max(1);
    Ok(WhitneyCover {
        centers,
        radii,
        reflected,
        small,
        small_threshold,
        overlap_bound,
        dist_to_set: dist,
    })
}

/// Cover of the whole space by balls `B(x_i, radius)` around a greedy
/// `radius`-separated net.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetCover {
    pub centers: Vec<usize>,
    pub radius: f64,
    /// Largest number of doubled balls `2 B_i` containing one point.
    pub overlap: usize,
}

pub fn net_cover(space: &MetricMeasureSpace, radius: f64) -> Result<NetCover> {
    if !(radius > 0.0) {
        return Err(crate::error::invalid("net radius must be positive"));
    }
    let mut blocked = vec![false; space.len()];
    let mut centers = Vec::new();
    for x in 0..space.len() {
        if blocked[x] {
            continue;
        }
        space.for_each_in_ball(x, radius, |y, _| blocked[y] = true);
        centers.push(x);
    }
    let mut count = vec![0usize; space.len()];
    for &c in &centers {
        space.for_each_in_ball(c, 2.0 * radius, |y, _| count[y] += 1);
    }
    let overlap = count.into_iter().max().unwrap_or(0);
    Ok(NetCover {
        centers,
        radius,
        overlap,
    })
}

/// `max(0, min(1, 2 - d / r))`: 1 on `B(x_i, r)`, 0 outside `B(x_i, 2r)`.
#[inline]
pub fn tent(d: f64, r: f64) -> f64 {
    (2.0 - d / r).clamp(0.0, 1.0)
}

/// Normalized tents `phi_i = psi_i / sum_j psi_j` over a family of balls.
///
/// Values are stored sparsely per point as `(ball index, phi_i(x))`, in
/// increasing ball order.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionOfUnity {
    rows: Vec<Vec<(usize, f64)>>,
    radii: Vec<f64>,
    /// Lipschitz factor `K`: each `phi_i` is `K / r_i`-Lipschitz.
    pub lipschitz_factor: f64,
}

impl PartitionOfUnity {
    /// Partition subordinate to balls `B(centers[i], radii[i])`; every point
    /// in `domain` must lie in some doubled ball.
    pub fn from_balls(
        space: &MetricMeasureSpace,
        centers: &[usize],
        radii: &[f64],
        domain: &SubsetMask,
        lipschitz_factor: f64,
    ) -> Result<Self> {
        let n = space.len();
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (i, (&c, &r)) in centers.iter().zip(radii).enumerate() {
            space.for_each_in_ball(c, 2.0 * r, |y, d| {
                let v = tent(d, r);
                if v > 0.0 && domain.contains(y) {
                    rows[y].push((i, v));
                }
            });
        }
        for (x, row) in rows.iter_mut().enumerate() {
            if !domain.contains(x) {
                continue;
            }
            let total: f64 = row.iter().map(|e| e.1).sum();
            if !(total > 0.0) {
                return Err(Error::CoverGap(x));
            }
            for e in row.iter_mut() {
                e.1 /= total;
            }
        }
        Ok(Self {
            rows,
            radii: radii.to_vec(),
            lipschitz_factor,
        })
    }

    /// Nonzero `(ball, phi)` entries at point `x`.
    pub fn row(&self, x: usize) -> &[(usize, f64)] {
        &self.rows[x]
    }

    pub fn value(&self, i: usize, x: usize) -> f64 {
        self.rows[x].iter().find(|e| e.0 == i).map_or(0.0, |e| e.1)
    }

    pub fn sum_at(&self, x: usize) -> f64 {
        self.rows[x].iter().map(|e| e.1).sum()
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// Lipschitz constant `K / r_i` of each bump.
    pub fn lipschitz_constants(&self) -> Vec<f64> {
        self.radii
            .iter()
            .map(|r| self.lipschitz_factor / r)
            .collect()
    }

    /// Checks support in `2B_i`, the lower bound `1/M` on `B_i` and that the
    /// functions sum to the indicator of `domain`.
    pub fn check_properties(
        &self,
        space: &MetricMeasureSpace,
        centers: &[usize],
        domain: &SubsetMask,
        lower_bound: f64,
    ) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidCover(msg));
        for x in 0..space.len() {
            let sum = self.sum_at(x);
            let target = if domain.contains(x) { 1.0 } else { 0.0 };
            if (sum - target).abs() > 1e-12 {
                return fail(format!("partition sums to {sum} at point {x}"));
            }
            for &(i, v) in &self.rows[x] {
                let d = space.distance(x, centers[i]);
                if v > 0.0 && d >= 2.0 * self.radii[i] {
                    return fail(format!("phi_{i} is nonzero outside 2B_{i} at {x}"));
                }
                if !(0.0..=1.0 + 1e-15).contains(&v) {
                    return fail(format!("phi_{i}({x}) = {v} outside [0, 1]"));
                }
            }
        }
        for (i, (&c, &r)) in centers.iter().zip(&self.radii).enumerate() {
            let mut bad = None;
            space.for_each_in_ball(c, r, |y, _| {
                if domain.contains(y) && self.value(i, y) < lower_bound * (1.0 - 1e-12) {
                    bad.get_or_insert(y);
                }
            });
            if let Some(y) = bad {
                return fail(format!("phi_{i} is below 1/M at {y} in B_{i}"));
            }
        }
        Ok(())
    }

    /// Largest observed `|phi_i(x) - phi_i(y)| r_i / (K d(x, y))` over all
    /// bumps and the pairs `(x, y)` with `x` on a stride through the space.
    /// A value at most 1 confirms the reported Lipschitz constants.
    pub fn lipschitz_ratio(&self, space: &MetricMeasureSpace, stride: usize) -> f64 {
        let xs: Vec<usize> = (0..space.len()).step_by(stride.max(1)).collect();
        xs.par_iter()
            .map(|&x| {
                let mut worst: f64 = 0.0;
                for y in 0..space.len() {
                    if y == x {
                        continue;
                    }
                    let d = space.distance(x, y);
                    let (rx, ry) = (&self.rows[x], &self.rows[y]);
                    for &(i, _) in rx.iter().chain(ry.iter()) {
                        let diff = (self.value(i, x) - self.value(i, y)).abs();
                        let bound = self.lipschitz_factor / self.radii[i] * d;
                        worst = worst.max(diff / bound);
                    }
                }
                worst
            })
            .reduce(|| 0.0, f64::max)
    }
}

/// Partition of unity on `X \ S` subordinate to a Whitney cover.
pub fn partition_of_unity(
    cover: &WhitneyCover,
    space: &MetricMeasureSpace,
    set: &SubsetMask,
) -> Result<PartitionOfUnity> {
    let k = 1.0 + 6.0 * cover.overlap_bound as f64;
    PartitionOfUnity::from_balls(space, &cover.centers, &cover.radii, &set.complement(), k)
}

/// Partition of unity on the whole space subordinate to a net cover.
pub fn net_partition(cover: &NetCover, space: &MetricMeasureSpace) -> Result<PartitionOfUnity> {
    let radii = vec![cover.radius; cover.centers.len()];
    let k = 1.0 + 2.0 * cover.overlap as f64;
    PartitionOfUnity::from_balls(
        space,
        &cover.centers,
        &radii,
        &SubsetMask::full(space.len()),
        k,
    )
}
