use std::collections::HashMap;

/// Uniform bucket grid over point coordinates (up to three dimensions).
///
/// Points are hashed by the integer cell `floor(coord / cell)`. Ball queries
/// visit the cells overlapping the query's bounding box, and fall back to a
/// linear scan when that box touches more cells than there are points.
#[derive(Debug, Clone)]
pub(crate) struct BucketIndex {
    cell: f64,
    dim: usize,
    buckets: HashMap<[i64; 3], Vec<usize>>,
    /// Occupied cell range per axis, used to clip queries.
    lo: [i64; 3],
    hi: [i64; 3],
}

impl BucketIndex {
    pub(crate) fn build(coords: &[f64], dim: usize, cell: f64) -> Option<Self> {
        if dim == 0 || dim > 3 || !(cell > 0.0) || coords.is_empty() {
            return None;
        }
        let mut buckets: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
        let mut lo = [i64::MAX; 3];
        let mut hi = [i64::MIN; 3];
        for (i, p) in coords.chunks_exact(dim).enumerate() {
            let key = Self::key_of(p, cell);
            for d in 0..3 {
                lo[d] = lo[d].min(key[d]);
                hi[d] = hi[d].max(key[d]);
            }
            buckets.entry(key).or_default().push(i);
        }
        Some(Self {
            cell,
            dim,
            buckets,
            lo,
            hi,
        })
    }

    fn key_of(p: &[f64], cell: f64) -> [i64; 3] {
        let mut key = [0i64; 3];
        for (k, &c) in key.iter_mut().zip(p) {
            *k = (c / cell).floor() as i64;
        }
        key
    }

    /// Candidate point ids whose cell overlaps the box `center ± r`, or
    /// `None` when a linear scan is cheaper.
    pub(crate) fn candidates(&self, center: &[f64], r: f64, n_points: usize) -> Option<Vec<usize>> {
        let mut from = [0i64; 3];
        let mut to = [0i64; 3];
        let mut cells: f64 = 1.0;
        for d in 0..self.dim {
            from[d] = (((center[d] - r) / self.cell).floor() as i64).max(self.lo[d]);
            to[d] = (((center[d] + r) / self.cell).floor() as i64).min(self.hi[d]);
            if to[d] < from[d] {
                return Some(Vec::new());
            }
            cells *= (to[d] - from[d] + 1) as f64;
        }
        if cells > n_points as f64 {
            return None;
        }
        let mut out = Vec::new();
        let mut key = [0i64; 3];
        for a in from[0]..=to[0] {
            key[0] = a;
            for b in from[1]..=to[1] {
                key[1] = b;
                for c in from[2]..=to[2] {
                    key[2] = c;
                    if let Some(ids) = self.buckets.get(&key) {
                        out.extend_from_slice(ids);
                    }
                }
            }
        }
        Some(out)
    }
}
