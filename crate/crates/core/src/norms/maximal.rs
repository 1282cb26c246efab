use rayon::prelude::*;

use crate::space::MetricMeasureSpace;

/// Hardy–Littlewood maximal function `M g(x) = sup_r avg_{B(x, r)} |g|`.
///
/// On a finite space the open balls around `x` are exactly the sets
/// `{ y : d(x, y) <= d_j }` for the distinct distances `d_j` from `x`, so the
/// supremum is a maximum over running averages.
pub fn maximal_function(g: &[f64], space: &MetricMeasureSpace) -> Vec<f64> {
    maximal_functions(&[g], space).pop().unwrap()
}

/// Maximal functions of several inputs sharing one sort per center.
pub fn maximal_functions(gs: &[&[f64]], space: &MetricMeasureSpace) -> Vec<Vec<f64>> {
    let n = space.len();
    let m = gs.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|x| {
            let order = space.sorted_from(x);
            let mut sums = vec![0.0; m];
            let mut best = vec![0.0f64; m];
            let mut mass = 0.0;
            let mut i = 0;
            while i < order.len() {
                let d = order[i].0;
                while i < order.len() && order[i].0 == d {
                    let y = order[i].1;
                    let w = space.weight(y);
                    mass += w;
                    for (s, g) in sums.iter_mut().zip(gs) {
                        *s += w * g[y].abs();
                    }
                    i += 1;
                }
                for (b, s) in best.iter_mut().zip(&sums) {
                    *b = b.max(s / mass);
                }
            }
            best
        })
        .collect();
    (0..m)
        .map(|j| rows.iter().map(|r| r[j]).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_pointwise_bound() {
        let space =
            MetricMeasureSpace::from_cloud(&[vec![0.0], vec![1.0], vec![3.0]], &[1.0, 2.0, 1.0])
                .unwrap();
        assert_eq!(
            maximal_function(&[2.0, 2.0, 2.0], &space),
            vec![2.0, 2.0, 2.0]
        );
        let g = [0.0, 1.0, 4.0];
        let mg = maximal_function(&g, &space);
        assert_eq!(mg[2], 4.0);
        // at 0: balls {0}, {0,1}, all -> 0, 2/3, 6/4
        assert!((mg[0] - 1.5).abs() < 1e-15);
    }
}
