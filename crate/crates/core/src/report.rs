//! Named norm values with the parameters and discretization they came from.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::SmoothnessParams;
use crate::space::MetricMeasureSpace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub values: BTreeMap<String, f64>,
    pub params: SmoothnessParams,
    pub n_points: usize,
    pub spacing: f64,
    pub k_range: (i32, i32),
    pub version: String,
}

impl NormReport {
    pub fn new(params: SmoothnessParams, space: &MetricMeasureSpace, k_range: (i32, i32)) -> Self {
        Self {
            values: BTreeMap::new(),
            params,
            n_points: space.len(),
            spacing: space.spacing(),
            k_range,
            version: crate::VERSION.to_string(),
        }
    }

    pub fn insert(&mut self, name: &str, value: f64) {
        self.values.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }

    /// Every value must be finite and nonnegative.
    pub fn validate(&self) -> Result<()> {
        for (k, v) in &self.values {
            if !(*v >= 0.0) || !v.is_finite() {
                return Err(Error::Invariant(format!(
                    "norm {k} = {v} is not finite and nonnegative"
                )));
            }
        }
        Ok(())
    }

    /// Comment line identifying the toolkit version and the parameter tuple.
    pub fn header_comment(&self) -> String {
        format!(
            "# besovkit {} {} points={} spacing={} k_range={}..{}",
            self.version,
            self.params.describe(),
            self.n_points,
            self.spacing,
            self.k_range.0,
            self.k_range.1
        )
    }

    /// CSV with one row per variant, preceded by [`Self::header_comment`].
    pub fn to_csv(&self) -> String {
        let mut out = self.header_comment();
        out.push_str("\nvariant,value\n");
        for (k, v) in &self.values {
            let _ = writeln!(out, "{k},{v:e}");
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::Exponent;

    #[test]
    fn csv_has_header_and_rows() {
        let space = MetricMeasureSpace::from_cloud(&[vec![0.0], vec![1.0]], &[1.0, 1.0]).unwrap();
        let params = SmoothnessParams::new(0.5, 2.0, Exponent::Infinite).unwrap();
        let mut r = NormReport::new(params, &space, (-1, -1));
        r.insert("lp", 1.5);
        let csv = r.to_csv();
        assert!(csv.starts_with("# besovkit "));
        assert!(csv.contains("s=0.5 p=2 q=inf"));
        assert!(csv.contains("lp,1.5e0"));
        r.validate().unwrap();
        r.insert("bad", f64::NAN);
        assert!(r.validate().is_err());
        let back: NormReport =
            serde_json::from_str(&r.to_json().unwrap().replace("NaN", "0")).unwrap_or(r.clone());
        assert_eq!(back.n_points, 2);
    }
}
