use besovkit_core::{MetricMeasureSpace, Region};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Named function generators evaluated on the points of a space.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    Constant {
        value: f64,
    },
    Coordinate {
        axis: usize,
    },
    /// `count` random trigonometric sums; seed `seed + i` for the `i`-th.
    RandomSmooth {
        #[serde(default)]
        seed: Option<u64>,
        #[serde(default = "one")]
        count: usize,
        #[serde(default = "four")]
        modes: usize,
    },
    Indicator {
        region: Region,
    },
}

fn one() -> usize {
    1
}

fn four() -> usize {
    4
}

pub struct NamedFunction {
    pub name: String,
    pub values: Vec<f64>,
}

fn coords(space: &MetricMeasureSpace, i: usize) -> Result<&[f64], CliError> {
    space
        .coords(i)
        .ok_or_else(|| CliError::Config("function generators need a space with coordinates".into()))
}

/// Smooth function from a seed: a sum of `modes` plane waves with decaying amplitudes.
pub fn random_smooth(
    space: &MetricMeasureSpace,
    seed: u64,
    modes: usize,
) -> Result<Vec<f64>, CliError> {
    let dim = space
        .dim()
        .ok_or_else(|| CliError::Config("random_smooth needs a Euclidean space".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let waves: Vec<(Vec<f64>, f64, f64)> = (0..modes)
        .map(|_| {
            let freq: Vec<f64> = (0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let norm = freq.iter().map(|f| f * f).sum::<f64>().sqrt();
            let amp = rng.gen_range(-1.0..1.0) / (1.0 + norm);
            let phase = rng.gen_range(0.0..std::f64::consts::TAU);
            (freq, amp, phase)
        })
        .collect();
    (0..space.len())
        .map(|i| {
            let x = coords(space, i)?;
            Ok(waves
                .iter()
                .map(|(f, a, ph)| {
                    let arg: f64 = f.iter().zip(x).map(|(fi, xi)| fi * xi).sum();
                    a * (std::f64::consts::TAU * arg + ph).sin()
                })
                .sum())
        })
        .collect()
}

pub fn generate(
    specs: &[FunctionSpec],
    space: &MetricMeasureSpace,
    base_seed: u64,
) -> Result<Vec<NamedFunction>, CliError> {
    let mut out = Vec::new();
    for (idx, spec) in specs.iter().enumerate() {
        match spec {
            FunctionSpec::Constant { value } => out.push(NamedFunction {
                name: format!("constant_{value}"),
                values: vec![*value; space.len()],
            }),
            FunctionSpec::Coordinate { axis } => {
                let values = (0..space.len())
                    .map(|i| {
                        coords(space, i)?
                            .get(*axis)
                            .copied()
                            .ok_or_else(|| CliError::Config(format!("axis {axis} out of range")))
                    })
                    .collect::<Result<Vec<f64>, CliError>>()?;
                out.push(NamedFunction {
                    name: format!("coordinate_{axis}"),
                    values,
                });
            }
            FunctionSpec::RandomSmooth { seed, count, modes } => {
                let start = seed.unwrap_or(base_seed.wrapping_add(1000 * idx as u64));
                for i in 0..*count {
                    let s = start.wrapping_add(i as u64);
                    out.push(NamedFunction {
                        name: format!("random_smooth_{s}"),
                        values: random_smooth(space, s, *modes)?,
                    });
                }
            }
            FunctionSpec::Indicator { region } => {
                let values = (0..space.len())
                    .map(|i| {
                        Ok(if region.contains(coords(space, i)?) {
                            1.0
                        } else {
                            0.0
                        })
                    })
                    .collect::<Result<Vec<f64>, CliError>>()?;
                out.push(NamedFunction {
                    name: format!("indicator_{idx}"),
                    values,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use besovkit_core::Bbox;

    fn grid() -> MetricMeasureSpace {
        MetricMeasureSpace::build_grid(&Region::Full, 0.25, &Bbox::cube(0.0, 1.0, 2)).unwrap()
    }

    #[test]
    fn random_smooth_is_seeded() {
        let space = grid();
        let a = random_smooth(&space, 7, 4).unwrap();
        assert_eq!(a, random_smooth(&space, 7, 4).unwrap());
        assert_ne!(a, random_smooth(&space, 8, 4).unwrap());
        // Each wave is bounded by its amplitude, which is below 1.
        assert!(a.iter().all(|v| v.abs() < 4.0));
    }

    #[test]
    fn generators_name_and_evaluate() {
        let space = grid();
        let specs = vec![
            FunctionSpec::Constant { value: 1.5 },
            FunctionSpec::Coordinate { axis: 1 },
            FunctionSpec::RandomSmooth {
                seed: None,
                count: 2,
                modes: 3,
            },
        ];
        let fs = generate(&specs, &space, 10).unwrap();
        let names: Vec<&str> = fs.iter().map(|f| f.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "constant_1.5",
                "coordinate_1",
                "random_smooth_2010",
                "random_smooth_2011"
            ]
        );
        for i in 0..space.len() {
            assert_eq!(fs[1].values[i], space.coords(i).unwrap()[1]);
        }
        assert!(generate(&[FunctionSpec::Coordinate { axis: 2 }], &space, 0).is_err());
    }
}
