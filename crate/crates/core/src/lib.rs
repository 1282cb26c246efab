//! Function-space numerics on finite metric measure spaces.
//!
//! The crate discretizes the machinery around Hajłasz–Besov and
//! Hajłasz–Triebel–Lizorkin spaces: fractional s-gradients and their norms,
//! modulus-of-smoothness Besov norms, median values, Whitney coverings with
//! Lipschitz partitions of unity, the median Whitney extension operator, the
//! K-functional decomposition between `L^p` and `M^{1,p}`, Lorentz norms and
//! the measure density condition.
//!
//! Every space is finite: a weighted point set with a metric. Balls are open,
//! `B(x, r) = { y : d(x, y) < r }`. Uniform grids over Euclidean regions carry
//! their lattice structure so translation-based quantities can be evaluated.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod cover;
mod error;
pub mod extend;
pub mod geometry;
pub mod interp;
pub mod median;
pub mod norms;
pub mod report;
pub mod space;

pub use cover::{NetCover, PartitionOfUnity, WhitneyCover};
pub use error::{Error, Result};
pub use extend::{ExtensionMethod, ExtensionParams, ExtensionResult};
pub use geometry::DensityReport;
pub use interp::{KDecomposition, KProfile};
pub use median::WeightedSample;
pub use norms::{Exponent, GradientSequence, ScaleGrid, SmoothnessParams};
pub use report::NormReport;
pub use space::{Bbox, DomainSpec, MetricMeasureSpace, Region, SpaceConstants, SubsetMask};

/// Toolkit version, stamped into every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
