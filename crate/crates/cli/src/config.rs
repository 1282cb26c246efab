use std::path::{Path, PathBuf};

use besovkit_core::extend::ExtensionMethod;
use besovkit_core::{DomainSpec, Exponent, ExtensionParams, Region, SmoothnessParams};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::functions::FunctionSpec;

/// Domain given inline or as a path to a domain-spec JSON file (relative
/// paths resolve against the config file's directory).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DomainRef {
    Path(PathBuf),
    Inline(DomainSpec),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ParamSpec {
    pub s: f64,
    pub p: f64,
    pub q: Exponent,
    #[serde(default)]
    pub r: Option<f64>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub eps_prime: Option<f64>,
    #[serde(default)]
    pub t: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtendSpec {
    #[serde(default = "default_method")]
    pub method: ExtensionMethod,
    #[serde(default = "default_v_radius")]
    pub v_radius: f64,
    #[serde(default = "default_small")]
    pub small_threshold: f64,
}

fn default_method() -> ExtensionMethod {
    ExtensionMethod::Median
}

fn default_v_radius() -> f64 {
    8.0
}

fn default_small() -> f64 {
    1.0
}

impl Default for ExtendSpec {
    fn default() -> Self {
        Self {
            method: default_method(),
            v_radius: default_v_radius(),
            small_threshold: default_small(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensitySpec {
    pub c_m: f64,
    pub r_min: f64,
    #[serde(default = "one")]
    pub r_max: f64,
    #[serde(default = "sixteen")]
    pub per_decade: usize,
}

fn one() -> f64 {
    1.0
}

fn sixteen() -> usize {
    16
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub domain: DomainRef,
    /// Subset `S`; the whole domain when absent.
    #[serde(default)]
    pub set: Option<Region>,
    pub params: ParamSpec,
    #[serde(default)]
    pub functions: Vec<FunctionSpec>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub refine: u32,
    #[serde(default)]
    pub extend: ExtendSpec,
    #[serde(default)]
    pub density: Option<DensitySpec>,
    /// Scales for the K-functional profile.
    #[serde(default)]
    pub t_grid: Vec<f64>,
    /// Scales `2^{-j}` for `j` in this range drive the modulus norms.
    #[serde(default = "default_j_range")]
    pub modulus_j: (i32, i32),
    /// Exponent `Q` for the embedding check; estimated from the space when absent.
    #[serde(default)]
    pub dimension: Option<f64>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_j_range() -> (i32, i32) {
    (0, 4)
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.smoothness()?;
        if self.extend.v_radius <= 0.0 || self.extend.small_threshold <= 0.0 {
            return Err(CliError::Config(
                "v_radius and small_threshold must be positive".into(),
            ));
        }
        if self.t_grid.iter().any(|t| !(*t > 0.0)) {
            return Err(CliError::Config("t_grid entries must be positive".into()));
        }
        if self.modulus_j.1 < self.modulus_j.0 {
            return Err(CliError::Config(
                "modulus_j must be an increasing pair".into(),
            ));
        }
        Ok(())
    }

    pub fn smoothness(&self) -> Result<SmoothnessParams, CliError> {
        let p = &self.params;
        let base =
            SmoothnessParams::new(p.s, p.p, p.q).map_err(|e| CliError::Config(e.to_string()))?;
        match p.r {
            Some(r) => base.with_r(r).map_err(|e| CliError::Config(e.to_string())),
            None => Ok(base),
        }
    }

    /// Extension parameters, scaling the cutoff with the neighborhood radius.
    pub fn extension(&self) -> Result<ExtensionParams, CliError> {
        let p = &self.params;
        let mut e = ExtensionParams::defaults(p.s, p.p, p.q).with_method(self.extend.method);
        if let Some(d) = p.delta {
            e.delta = d;
        }
        if let Some(v) = p.eps_prime {
            e.eps_prime = v;
        }
        if let Some(t) = p.t {
            e.t_inner = t;
        }
        e.v_radius = self.extend.v_radius;
        e.cutoff_outer = self.extend.v_radius;
        e.cutoff_inner = self.extend.v_radius / 2.0;
        e.small_threshold = self.extend.small_threshold;
        e.validate()
            .map_err(|err| CliError::Config(err.to_string()))?;
        Ok(e)
    }

    pub fn domain_spec(&self, extra_refine: u32) -> Result<DomainSpec, CliError> {
        let spec = match &self.domain {
            DomainRef::Inline(spec) => spec.clone(),
            DomainRef::Path(p) => {
                let path = if p.is_absolute() {
                    p.clone()
                } else {
                    self.base_dir.join(p)
                };
                let text = std::fs::read_to_string(&path).map_err(|e| {
                    CliError::Config(format!("cannot read domain {}: {e}", path.display()))
                })?;
                serde_json::from_str(&text).map_err(|e| {
                    CliError::Config(format!("invalid domain {}: {e}", path.display()))
                })?
            }
        };
        Ok(spec.refined(self.refine + extra_refine))
    }
}
