use serde::{Deserialize, Serialize};

/// Tolerance used when deciding whether a coordinate lies exactly on a
/// lower-dimensional feature (a slit, a box face).
const ON_FEATURE_TOL: f64 = 1e-12;

/// A named region of `R^n`, evaluated pointwise on grid coordinates.
///
/// Regions compose through [`Region::Not`], [`Region::Intersection`] and
/// [`Region::Union`], and round-trip through the `region` entry of the
/// domain-spec JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Region {
    /// Every point of the bounding box.
    Full,
    /// Axis-aligned box `[lo, hi]`, or `(lo, hi)` when `open` is set.
    Box {
        lo: Vec<f64>,
        hi: Vec<f64>,
        #[serde(default)]
        open: bool,
    },
    /// Open Euclidean ball.
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    /// `{ x : x[axis] <= threshold }`.
    HalfSpace {
        axis: usize,
        threshold: f64,
    },
    /// Generalized Sierpiński carpet in the square `origin + [0, side]^2`.
    ///
    /// At level `l` (1-based) every active cell of side `side * 3^{-(l-1)}`
    /// loses its concentric open central square of side `fractions[l-1]`
    /// times the cell side; the eight non-central thirds stay active.
    Carpet {
        origin: [f64; 2],
        side: f64,
        fractions: Vec<f64>,
    },
    /// Unit disc minus the slit `[0, 1) x {0}`.
    SlitDisc,
    /// `{ (x, y) : 0 < x < 1, |y| < x^beta }`.
    Cusp {
        beta: f64,
    },
    Not {
        region: std::boxed::Box<Region>,
    },
    Intersection {
        regions: Vec<Region>,
    },
    Union {
        regions: Vec<Region>,
    },
}

impl Region {
    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Region::Full => true,
            Region::Box { lo, hi, open } => {
                lo.len() == x.len()
                    && hi.len() == x.len()
                    && x.iter().zip(lo.iter().zip(hi)).all(|(&c, (&a, &b))| {
                        if *open {
                            c > a && c < b
                        } else {
                            c >= a && c <= b
                        }
                    })
            }
            Region::Ball { center, radius } => {
                center.len() == x.len()
                    && x.iter()
                        .zip(center)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt()
                        < *radius
            }
            Region::HalfSpace { axis, threshold } => x.get(*axis).is_some_and(|&c| c <= *threshold),
            Region::Carpet {
                origin,
                side,
                fractions,
            } => x.len() == 2 && carpet_contains(origin, *side, fractions, [x[0], x[1]]),
            Region::SlitDisc => {
                if x.len() != 2 {
                    return false;
                }
                let inside = x[0] * x[0] + x[1] * x[1] < 1.0;
                let on_slit = x[1].abs() <= ON_FEATURE_TOL && x[0] >= 0.0 && x[0] < 1.0;
                inside && !on_slit
            }
            Region::Cusp { beta } => {
                x.len() == 2 && x[0] > 0.0 && x[0] < 1.0 && x[1].abs() < x[0].powf(*beta)
            }
            Region::Not { region } => !region.contains(x),
            Region::Intersection { regions } => regions.iter().all(|r| r.contains(x)),
            Region::Union { regions } => regions.iter().any(|r| r.contains(x)),
        }
    }

    pub fn closed_box(lo: &[f64], hi: &[f64]) -> Region {
        Region::Box {
            lo: lo.to_vec(),
            hi: hi.to_vec(),
            open: false,
        }
    }

    pub fn open_box(lo: &[f64], hi: &[f64]) -> Region {
        Region::Box {
            lo: lo.to_vec(),
            hi: hi.to_vec(),
            open: true,
        }
    }
}

fn carpet_contains(origin: &[f64; 2], side: f64, fractions: &[f64], p: [f64; 2]) -> bool {
    let mut local = [(p[0] - origin[0]) / side, (p[1] - origin[1]) / side];
    if local.iter().any(|&c| !(0.0..=1.0).contains(&c)) {
        return false;
    }
    // `local` is expressed in units of the current active cell.
    for &a in fractions {
        let half = a / 2.0;
        if (local[0] - 0.5).abs() < half && (local[1] - 0.5).abs() < half {
            return false;
        }
        let cell = [child_index(local[0]), child_index(local[1])];
        if cell == [1, 1] {
            // The central third is never subdivided further.
            return true;
        }
        local = [
            local[0] * 3.0 - cell[0] as f64,
            local[1] * 3.0 - cell[1] as f64,
        ];
    }
    true
}

fn child_index(c: f64) -> usize {
    ((c * 3.0).floor() as i64).clamp(0, 2) as usize
}

impl std::ops::Not for Region {
    type Output = Region;

    fn not(self) -> Region {
        Region::Not {
            region: Box::new(self),
        }
    }
}
