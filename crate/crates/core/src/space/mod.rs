//! Finite metric measure spaces, subsets and structural constants.
//!
//! A [`MetricMeasureSpace`] is either a uniform grid over a region of `R^n`
//! (weights `h^n`, Euclidean metric, lattice structure available for
//! translations) or a generic weighted point cloud, optionally with an
//! explicit distance table. All structures are immutable after construction.

mod index;
mod region;

use std::path::Path;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use index::BucketIndex;
pub use region::Region;

/// Axis-aligned bounding box, one `[lo, hi]` interval per dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bbox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Bbox {
    pub fn new(lo: &[f64], hi: &[f64]) -> Self {
        Self {
            lo: lo.to_vec(),
            hi: hi.to_vec(),
        }
    }

    /// Cube `[lo, hi]^dim`.
    pub fn cube(lo: f64, hi: f64, dim: usize) -> Self {
        Self {
            lo: vec![lo; dim],
            hi: vec![hi; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// Distance from `x` to the boundary of the box (0 outside).
    pub fn distance_to_boundary(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(&c, (&a, &b))| (c - a).min(b - c))
            .fold(f64::INFINITY, f64::min)
            .max(0.0)
    }
}

/// Lattice bookkeeping for spaces built by [`MetricMeasureSpace::build_grid`].
#[derive(Debug, Clone)]
pub struct GridInfo {
    pub spacing: f64,
    pub bbox: Bbox,
    lattice: Vec<[i64; 3]>,
    counts: [i64; 3],
    /// Point id per lattice cell of the bbox, `usize::MAX` when absent.
    dense: Vec<usize>,
}

impl GridInfo {
    fn new(spacing: f64, bbox: Bbox, lattice: Vec<[i64; 3]>) -> Self {
        let dim = bbox.dim();
        let mut counts = [1i64; 3];
        for (d, c) in counts.iter_mut().enumerate().take(dim) {
            *c = ((bbox.hi[d] - bbox.lo[d]) / spacing + 1e-9).floor() as i64 + 1;
        }
        let mut dense = vec![usize::MAX; (counts[0] * counts[1] * counts[2]) as usize];
        for (id, l) in lattice.iter().enumerate() {
            dense[((l[0] * counts[1] + l[1]) * counts[2] + l[2]) as usize] = id;
        }
        Self {
            spacing,
            bbox,
            lattice,
            counts,
            dense,
        }
    }

    /// Integer lattice coordinates of point `id`.
    pub fn lattice(&self, id: usize) -> [i64; 3] {
        self.lattice[id]
    }

    /// Point at lattice position `lattice(id) + offset`, if it belongs to the space.
    pub fn translate(&self, id: usize, offset: &[i64; 3]) -> Option<usize> {
        let p = self.lattice[id];
        let mut key = [0i64; 3];
        for d in 0..3 {
            key[d] = p[d] + offset[d];
            if key[d] < 0 || key[d] >= self.counts[d] {
                return None;
            }
        }
        let id =
            self.dense[((key[0] * self.counts[1] + key[1]) * self.counts[2] + key[2]) as usize];
        (id != usize::MAX).then_some(id)
    }

    /// Lattice offsets `m` with `|m| * spacing <= radius` (closed), sorted by norm.
    pub fn offsets_within(&self, radius: f64, closed: bool) -> Vec<[i64; 3]> {
        let dim = self.bbox.dim();
        let reach = (radius / self.spacing).floor() as i64 + 1;
        let span = |d: usize| if d < dim { -reach..=reach } else { 0..=0 };
        let mut out = Vec::new();
        for a in span(0) {
            for b in span(1) {
                for c in span(2) {
                    let norm = self.spacing * ((a * a + b * b + c * c) as f64).sqrt();
                    let inside = if closed {
                        norm <= radius
                    } else {
                        norm < radius
                    };
                    if inside {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out.sort_by_key(|m| (m[0] * m[0] + m[1] * m[1] + m[2] * m[2], *m));
        out
    }

    /// Measure of the open ball `B(0, t)` in the infinite lattice `spacing * Z^n`.
    pub fn lattice_ball_measure(&self, t: f64) -> f64 {
        self.offsets_within(t, false).len() as f64 * self.spacing.powi(self.bbox.dim() as i32)
    }
}

#[derive(Debug, Clone)]
enum Metric {
    Euclidean { dim: usize, coords: Vec<f64> },
    Table { dist: Vec<f64> },
}

/// Finite set of points with positive weights and a metric.
#[derive(Debug, Clone)]
pub struct MetricMeasureSpace {
    metric: Metric,
    weights: Vec<f64>,
    grid: Option<GridInfo>,
    index: Option<BucketIndex>,
    extent: OnceLock<(f64, f64)>,
}

impl MetricMeasureSpace {
    /// Uniform grid of spacing `h` over `bbox` restricted to `region`.
    ///
    /// Grid lines start at `bbox.lo` and include `bbox.hi` whenever it is a
    /// whole number of steps away. Every point has weight `h^n`.
    pub fn build_grid(region: &Region, h: f64, bbox: &Bbox) -> Result<Self> {
        let dim = bbox.dim();
        if !(h > 0.0) || !h.is_finite() {
            return Err(invalid(format!("grid spacing must be positive, got {h}")));
        }
        if dim == 0 || dim > 3 || bbox.hi.len() != dim {
            return Err(invalid("bbox must have between 1 and 3 dimensions"));
        }
        if bbox.lo.iter().zip(&bbox.hi).any(|(a, b)| !(a <= b)) {
            return Err(invalid("bbox is empty"));
        }
        let counts: Vec<i64> = (0..dim)
            .map(|d| ((bbox.hi[d] - bbox.lo[d]) / h + 1e-9).floor() as i64 + 1)
            .collect();
        let mut coords = Vec::new();
        let mut lattice = Vec::new();
        let extent = |d: usize| if d < dim { 0..counts[d] } else { 0..1 };
        let mut p = vec![0.0; dim];
        for a in extent(0) {
            for b in extent(1) {
                for c in extent(2) {
                    let idx = [a, b, c];
                    for d in 0..dim {
                        p[d] = bbox.lo[d] + idx[d] as f64 * h;
                    }
                    if region.contains(&p) {
                        lattice.push(idx);
                        coords.extend_from_slice(&p);
                    }
                }
            }
        }
        if lattice.is_empty() {
            return Err(Error::EmptyDomain);
        }
        let n = lattice.len();
        let index = BucketIndex::build(&coords, dim, h);
        Ok(Self {
            metric: Metric::Euclidean { dim, coords },
            weights: vec![h.powi(dim as i32); n],
            grid: Some(GridInfo::new(h, bbox.clone(), lattice)),
            index,
            extent: OnceLock::new(),
        })
    }

    /// Weighted point cloud in `R^dim` with the Euclidean metric.
    pub fn from_cloud(points: &[Vec<f64>], weights: &[f64]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyDomain);
        }
        if points.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: points.len(),
                got: weights.len(),
            });
        }
        let dim = points[0].len();
        if dim == 0 || points.iter().any(|p| p.len() != dim) {
            return Err(Error::InvalidSpace(
                "points must share a positive dimension".into(),
            ));
        }
        if points.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidSpace("non-finite coordinate".into()));
        }
        validate_weights(weights)?;
        let coords: Vec<f64> = points.iter().flatten().copied().collect();
        let mut space = Self {
            metric: Metric::Euclidean { dim, coords },
            weights: weights.to_vec(),
            grid: None,
            index: None,
            extent: OnceLock::new(),
        };
        let (_, min_d) = space.extent_pair();
        if !(min_d > 0.0) && space.len() > 1 {
            return Err(Error::InvalidSpace("duplicate points".into()));
        }
        if dim <= 3 && space.len() > 1 {
            let cell = (space.diameter() / (space.len() as f64).powf(1.0 / dim as f64)).max(min_d);
            if let Metric::Euclidean { coords, .. } = &space.metric {
                space.index = BucketIndex::build(coords, dim, cell);
            }
        }
        Ok(space)
    }

    /// Weighted finite metric space from a dense, row-major distance table.
    ///
    /// Symmetry, zero diagonal, positivity and the triangle inequality are
    /// checked on all triples for up to 60 points and on a deterministic
    /// sample of triples beyond that.
    pub fn from_table(distances: &[Vec<f64>], weights: &[f64]) -> Result<Self> {
        let n = distances.len();
        if n == 0 {
            return Err(Error::EmptyDomain);
        }
        if weights.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: weights.len(),
            });
        }
        validate_weights(weights)?;
        let mut dist = Vec::with_capacity(n * n);
        for row in distances {
            if row.len() != n {
                return Err(Error::InvalidSpace("distance table must be square".into()));
            }
            dist.extend_from_slice(row);
        }
        for i in 0..n {
            if dist[i * n + i] != 0.0 {
                return Err(Error::InvalidSpace(format!("nonzero diagonal at {i}")));
            }
            for j in 0..i {
                let d = dist[i * n + j];
                if !(d > 0.0) || !d.is_finite() {
                    return Err(Error::InvalidSpace(format!(
                        "distance ({i}, {j}) must be positive and finite"
                    )));
                }
                if d != dist[j * n + i] {
                    return Err(Error::InvalidSpace(format!(
                        "asymmetric distance ({i}, {j})"
                    )));
                }
            }
        }
        let check = |i: usize, j: usize, k: usize| -> Result<()> {
            let lhs = dist[i * n + k];
            let rhs = dist[i * n + j] + dist[j * n + k];
            if lhs > rhs * (1.0 + 1e-12) {
                return Err(Error::InvalidSpace(format!(
                    "triangle inequality fails for ({i}, {j}, {k})"
                )));
            }
            Ok(())
        };
        if n <= 60 {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        check(i, j, k)?;
                    }
                }
            }
        } else {
            let step = (n / 37).max(1);
            for i in (0..n).step_by(step) {
                for j in 0..n {
                    for k in (0..n).step_by(step) {
                        check(i, j, k)?;
                    }
                }
            }
        }
        Ok(Self {
            metric: Metric::Table { dist },
            weights: weights.to_vec(),
            grid: None,
            index: None,
            extent: OnceLock::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn total_measure(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Ambient dimension for Euclidean spaces, `None` for distance tables.
    pub fn dim(&self) -> Option<usize> {
        match &self.metric {
            Metric::Euclidean { dim, .. } => Some(*dim),
            Metric::Table { .. } => None,
        }
    }

    pub fn coords(&self, i: usize) -> Option<&[f64]> {
        match &self.metric {
            Metric::Euclidean { dim, coords } => Some(&coords[i * dim..(i + 1) * dim]),
            Metric::Table { .. } => None,
        }
    }

    pub fn grid(&self) -> Option<&GridInfo> {
        self.grid.as_ref()
    }

    /// Grid spacing, or the minimal pairwise distance for generic spaces.
    pub fn spacing(&self) -> f64 {
        match &self.grid {
            Some(g) => g.spacing,
            None => self.min_distance(),
        }
    }

    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        match &self.metric {
            Metric::Euclidean { dim, coords } => {
                let a = &coords[i * dim..(i + 1) * dim];
                let b = &coords[j * dim..(j + 1) * dim];
                a.iter()
                    .zip(b)
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt()
            }
            Metric::Table { dist } => dist[i * self.len() + j],
        }
    }

    fn extent_pair(&self) -> (f64, f64) {
        *self.extent.get_or_init(|| {
            let n = self.len();
            (0..n)
                .into_par_iter()
                .map(|i| {
                    let mut hi: f64 = 0.0;
                    let mut lo = f64::INFINITY;
                    for j in 0..n {
                        if j != i {
                            let d = self.distance(i, j);
                            hi = hi.max(d);
                            lo = lo.min(d);
                        }
                    }
                    (hi, lo)
                })
                .reduce(|| (0.0, f64::INFINITY), |a, b| (a.0.max(b.0), a.1.min(b.1)))
        })
    }

    /// Largest pairwise distance (0 for a single point).
    pub fn diameter(&self) -> f64 {
        self.extent_pair().0
    }

    /// Smallest positive pairwise distance (infinite for a single point).
    pub fn min_distance(&self) -> f64 {
        self.extent_pair().1
    }

    /// Calls `f(y, d(x, y))` for every `y` with `d(x, y) < r`.
    pub fn for_each_in_ball(&self, x: usize, r: f64, mut f: impl FnMut(usize, f64)) {
        let candidates = match (&self.index, &self.metric) {
            (Some(index), Metric::Euclidean { .. }) => {
                index.candidates(self.coords(x).unwrap(), r, self.len())
            }
            _ => None,
        };
        match candidates {
            Some(ids) => {
                for y in ids {
                    let d = self.distance(x, y);
                    if d < r {
                        f(y, d);
                    }
                }
            }
            None => {
                for y in 0..self.len() {
                    let d = self.distance(x, y);
                    if d < r {
                        f(y, d);
                    }
                }
            }
        }
    }

    /// Open ball `{ y : d(x, y) < r }`, sorted by point id.
    pub fn ball(&self, x: usize, r: f64) -> Vec<usize> {
        let mut out = Vec::new();
        self.for_each_in_ball(x, r, |y, _| out.push(y));
        out.sort_unstable();
        out
    }

    pub fn ball_measure(&self, x: usize, r: f64) -> f64 {
        let mut ids = self.ball(x, r);
        ids.sort_unstable();
        ids.iter().map(|&y| self.weights[y]).sum()
    }

    /// All points ordered by distance from `x` (ties by id), with distances.
    pub fn sorted_from(&self, x: usize) -> Vec<(f64, usize)> {
        let mut v: Vec<(f64, usize)> = (0..self.len()).map(|y| (self.distance(x, y), y)).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        v
    }

    /// `dist(x, S)` for every point; zero on members of `set`.
    pub fn distance_to_set(&self, set: &SubsetMask) -> Vec<f64> {
        let members = set.ids();
        (0..self.len())
            .into_par_iter()
            .map(|x| {
                if set.contains(x) {
                    0.0
                } else {
                    members
                        .iter()
                        .map(|&y| self.distance(x, y))
                        .fold(f64::INFINITY, f64::min)
                }
            })
            .collect()
    }

    /// Nearest member of `set` to `x`, ties broken by lowest id.
    pub fn nearest_in(&self, x: usize, set: &SubsetMask) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for &y in set.ids() {
            let d = self.distance(x, y);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((y, d));
            }
        }
        best
    }

    /// Restriction of the metric and measure to `ids` (kept in the given order).
    pub fn subspace(&self, ids: &[usize]) -> Result<Self> {
        if ids.is_empty() {
            return Err(Error::EmptyDomain);
        }
        let weights: Vec<f64> = ids.iter().map(|&i| self.weights[i]).collect();
        match &self.metric {
            Metric::Euclidean { .. } => {
                let points: Vec<Vec<f64>> = ids
                    .iter()
                    .map(|&i| self.coords(i).unwrap().to_vec())
                    .collect();
                let mut sub = Self::from_cloud(&points, &weights)?;
                if let Some(g) = &self.grid {
                    let lattice: Vec<[i64; 3]> = ids.iter().map(|&i| g.lattice[i]).collect();
                    sub.grid = Some(GridInfo::new(g.spacing, g.bbox.clone(), lattice));
                    if let Metric::Euclidean { dim, coords } = &sub.metric {
                        sub.index = BucketIndex::build(coords, *dim, g.spacing);
                    }
                }
                Ok(sub)
            }
            Metric::Table { .. } => {
                let table: Vec<Vec<f64>> = ids
                    .iter()
                    .map(|&i| ids.iter().map(|&j| self.distance(i, j)).collect())
                    .collect();
                Self::from_table(&table, &weights)
            }
        }
    }

    /// Loads and validates a domain-spec JSON file.
    pub fn from_spec_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let spec: DomainSpec = serde_json::from_str(&text)?;
        spec.build()
    }
}

fn validate_weights(weights: &[f64]) -> Result<()> {
    if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
        return Err(Error::InvalidSpace(
            "weights must be positive and finite".into(),
        ));
    }
    Ok(())
}

/// Domain-spec JSON: either a grid over a named region or an explicit cloud.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainSpec {
    Grid {
        spacing: f64,
        bbox: Vec<[f64; 2]>,
        region: Region,
    },
    Cloud {
        points: Vec<Vec<f64>>,
        weights: Vec<f64>,
    },
}

impl DomainSpec {
    pub fn build(&self) -> Result<MetricMeasureSpace> {
        match self {
            DomainSpec::Grid {
                spacing,
                bbox,
                region,
            } => {
                let lo: Vec<f64> = bbox.iter().map(|b| b[0]).collect();
                let hi: Vec<f64> = bbox.iter().map(|b| b[1]).collect();
                MetricMeasureSpace::build_grid(region, *spacing, &Bbox { lo, hi })
            }
            DomainSpec::Cloud { points, weights } => {
                MetricMeasureSpace::from_cloud(points, weights)
            }
        }
    }

    /// Same domain with the grid spacing divided by `2^levels`.
    pub fn refined(&self, levels: u32) -> Self {
        match self {
            DomainSpec::Grid {
                spacing,
                bbox,
                region,
            } => DomainSpec::Grid {
                spacing: spacing / f64::from(1u32 << levels),
                bbox: bbox.clone(),
                region: region.clone(),
            },
            other => other.clone(),
        }
    }
}

/// Measurable subset `S` of a space, stored as a membership vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetMask {
    members: Vec<bool>,
    ids: Vec<usize>,
}

impl SubsetMask {
    pub fn from_members(members: Vec<bool>) -> Self {
        let ids = members
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
            .collect();
        Self { members, ids }
    }

    pub fn full(n: usize) -> Self {
        Self::from_members(vec![true; n])
    }

    pub fn from_ids(n: usize, ids: &[usize]) -> Result<Self> {
        let mut members = vec![false; n];
        for &i in ids {
            if i >= n {
                return Err(invalid(format!("point id {i} out of range")));
            }
            members[i] = true;
        }
        Ok(Self::from_members(members))
    }

    pub fn from_fn(space: &MetricMeasureSpace, f: impl Fn(usize) -> bool) -> Self {
        Self::from_members((0..space.len()).map(f).collect())
    }

    /// Members whose coordinates lie in `region`.
    pub fn from_region(space: &MetricMeasureSpace, region: &Region) -> Result<Self> {
        if space.dim().is_none() {
            return Err(Error::InvalidSpace("regions need coordinates".into()));
        }
        Ok(Self::from_fn(space, |i| {
            region.contains(space.coords(i).unwrap())
        }))
    }

    pub fn parent_len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.members[i]
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    pub fn count(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn complement(&self) -> Self {
        Self::from_members(self.members.iter().map(|m| !m).collect())
    }

    pub fn is_subset_of(&self, other: &SubsetMask) -> bool {
        self.ids.iter().all(|&i| other.contains(i))
    }

    pub fn induced_measure(&self, space: &MetricMeasureSpace) -> f64 {
        self.ids.iter().map(|&i| space.weight(i)).sum()
    }

    /// The members as a space of their own (metric and measure restricted).
    pub fn induced_space(&self, space: &MetricMeasureSpace) -> Result<MetricMeasureSpace> {
        self.check_parent(space)?;
        space.subspace(&self.ids)
    }

    pub(crate) fn check_parent(&self, space: &MetricMeasureSpace) -> Result<()> {
        if self.members.len() != space.len() {
            return Err(Error::LengthMismatch {
                expected: space.len(),
                got: self.members.len(),
            });
        }
        Ok(())
    }
}

/// Empirical doubling and regularity constants of a discretized space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceConstants {
    /// Maximum sampled `mu(B(x, 2r)) / mu(B(x, r))`.
    pub doubling_estimate: f64,
    /// Least-squares slope of mean `log mu(B(x, r))` against `log r`.
    pub q_estimate: f64,
    /// Smallest `c_Q` with `c_Q^{-1} r^Q <= mu(B(x, r)) <= c_Q r^Q` on the samples.
    pub q_constant: f64,
    pub radius_range: (f64, f64),
    pub centers_sampled: usize,
}

/// Estimates the doubling constant and the regularity exponent `Q` from
/// exact ball measures at the given radii.
///
/// Centers are all points for spaces up to 400 points, otherwise a
/// deterministic stride sample of about 400 points.
pub fn estimate_constants(space: &MetricMeasureSpace, radii: &[f64]) -> Result<SpaceConstants> {
    if radii.is_empty() {
        return Err(invalid("radius list is empty"));
    }
    if space.len() < 2 {
        return Err(Error::DegenerateFit("space has a single point".into()));
    }
    let (diam, min_d) = (space.diameter(), space.min_distance());
    let lo_ok = space.grid().map_or(min_d, |g| g.spacing);
    for &r in radii {
        if !(r > lo_ok * (1.0 - 1e-12)) || r > diam * (1.0 + 1e-12) {
            return Err(invalid(format!(
                "radius {r} outside (spacing, diameter] = ({lo_ok}, {diam}]"
            )));
        }
    }
    let r_min = radii.iter().copied().fold(f64::INFINITY, f64::min);
    let r_max = radii.iter().copied().fold(0.0, f64::max);
    if r_max <= r_min {
        return Err(Error::DegenerateFit("all radii are equal".into()));
    }
    let stride = space.len().div_ceil(400).max(1);
    let centers: Vec<usize> = (0..space.len()).step_by(stride).collect();

    // per center: ball measures at r and 2r for every radius
    let samples: Vec<Vec<(f64, f64)>> = centers
        .par_iter()
        .map(|&x| {
            radii
                .iter()
                .map(|&r| (space.ball_measure(x, r), space.ball_measure(x, 2.0 * r)))
                .collect()
        })
        .collect();

    let mut doubling: f64 = 1.0;
    for row in &samples {
        for &(m1, m2) in row {
            doubling = doubling.max(m2 / m1);
        }
    }
    let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = (0..radii.len())
        .map(|k| samples.iter().map(|row| row[k].0.ln()).sum::<f64>() / samples.len() as f64)
        .collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::DegenerateFit("radii have no spread".into()));
    }
    let q = sxy / sxx;
    let mut c_q: f64 = 1.0;
    for row in &samples {
        for (&r, &(m, _)) in radii.iter().zip(row) {
            let model = r.powf(q);
            c_q = c_q.max(m / model).max(model / m);
        }
    }
    Ok(SpaceConstants {
        doubling_estimate: doubling,
        q_estimate: q,
        q_constant: c_q,
        radius_range: (r_min, r_max),
        centers_sampled: centers.len(),
    })
}
