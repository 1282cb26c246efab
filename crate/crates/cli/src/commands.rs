use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use besovkit_core::cover::{partition_of_unity, whitney_cover_with};
use besovkit_core::extend::{extend_with, extension_ratios};
use besovkit_core::geometry::{check_measure_density, log_uniform_radii};
use besovkit_core::interp::{k_profile, lorentz_embedding_check};
use besovkit_core::norms::{
    besov_modulus_norms, canonical_gradient, hajlasz_norms, tl_function_norm, HajlaszOptions,
    TlVariant, ORACLE_CAP,
};
use besovkit_core::space::estimate_constants;
use besovkit_core::{MetricMeasureSpace, ScaleGrid, SubsetMask};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::functions::{generate, NamedFunction};

/// Everything a subcommand needs besides its config.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out: PathBuf,
    pub seed: Option<u64>,
    pub refine: u32,
}

struct Context {
    cfg: ExperimentConfig,
    space: MetricMeasureSpace,
    set: SubsetMask,
    seed: u64,
    refine: u32,
}

impl Context {
    fn new(cfg: ExperimentConfig, opts: &RunOptions) -> Result<Self, CliError> {
        let spec = cfg.domain_spec(opts.refine)?;
        let space = spec.build().map_err(|e| match e {
            besovkit_core::Error::EmptyDomain => CliError::Geometry("empty domain".into()),
            other => CliError::Config(other.to_string()),
        })?;
        let set = match &cfg.set {
            Some(region) => SubsetMask::from_region(&space, region)?,
            None => SubsetMask::full(space.len()),
        };
        if set.is_empty() {
            return Err(CliError::Geometry("subset S has no grid points".into()));
        }
        Ok(Self {
            seed: opts.seed.unwrap_or(cfg.seed),
            refine: cfg.refine + opts.refine,
            cfg,
            space,
            set,
        })
    }

    fn header(&self, command: &str) -> Result<String, CliError> {
        Ok(format!(
            "# besovkit {} command={command} {} seed={} refine={} points={} spacing={}",
            besovkit_core::VERSION,
            self.cfg.smoothness()?.describe(),
            self.seed,
            self.refine,
            self.space.len(),
            self.space.spacing()
        ))
    }

    fn functions(&self) -> Result<Vec<NamedFunction>, CliError> {
        let fs = generate(&self.cfg.functions, &self.space, self.seed)?;
        if fs.is_empty() {
            return Err(CliError::Config("no functions configured".into()));
        }
        Ok(fs)
    }
}

fn write(out: &Path, name: &str, text: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(out)?;
    let path = out.join(name);
    fs::write(&path, text)?;
    Ok(path)
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// Every norm variant for every function, with a chain-ordering column.
pub fn cmd_norms(cfg: ExperimentConfig, opts: &RunOptions) -> Result<Vec<PathBuf>, CliError> {
    let ctx = Context::new(cfg, opts)?;
    let params = ctx.cfg.smoothness()?;
    let grid = ScaleGrid::dyadic(ctx.cfg.modulus_j.0, ctx.cfg.modulus_j.1)?;
    let options = HajlaszOptions {
        oracle: ctx.set.count() <= ORACLE_CAP,
        padded: true,
    };
    let describe = params.describe();
    let mut csv = ctx.header("norms")?;
    csv.push_str("\nfunction,variant,value,params,chain\n");
    for f in ctx.functions()? {
        let mut report = hajlasz_norms(&f.values, &ctx.set, &ctx.space, &params, options)?;
        let besov = besov_modulus_norms(&f.values, &ctx.space, &ctx.set, &params, &grid)?;
        let cal_f = tl_function_norm(
            &f.values,
            &ctx.space,
            &ctx.set,
            &params,
            TlVariant::CalF,
            &grid,
        )?;
        let hat_f = tl_function_norm(
            &f.values,
            &ctx.space,
            &ctx.set,
            &params,
            TlVariant::HatF,
            &grid,
        )?;
        if let Some(b) = besov.b {
            report.insert("b_modulus", b);
        }
        report.insert("cal_b_modulus", besov.cal_b);
        report.insert("hat_b_modulus", besov.hat_b);
        report.insert("cal_f_modulus", cal_f);
        report.insert("hat_f_modulus", hat_f);
        let le = |a: f64, b: f64| a <= b * (1.0 + 1e-12);
        let chain = le(besov.hat_b, besov.cal_b)
            && besov.b.is_none_or(|b| le(besov.cal_b, b))
            && le(hat_f, cal_f);
        let tag = if chain { "ok" } else { "fail" };
        for (variant, value) in &report.values {
            let _ = writeln!(csv, "{},{variant},{value:e},{describe},{tag}", f.name);
        }
    }
    Ok(vec![write(&opts.out, "norms.csv", &csv)?])
}

/// Extension pipeline per function with restriction, validity and norm-ratio columns.
pub fn cmd_extend(cfg: ExperimentConfig, opts: &RunOptions) -> Result<Vec<PathBuf>, CliError> {
    let ctx = Context::new(cfg, opts)?;
    let params = ctx.cfg.extension()?;
    if ctx.set.count() == ctx.space.len() {
        return Err(CliError::Config("extension needs a proper subset S".into()));
    }
    let dist = ctx.space.distance_to_set(&ctx.set);
    if dist.iter().any(|&d| d >= params.v_radius) {
        return Err(CliError::Geometry("complement not covered by V".into()));
    }
    let cover = whitney_cover_with(&ctx.space, &ctx.set, params.small_threshold)?;
    let pou = partition_of_unity(&cover, &ctx.space, &ctx.set)?;
    let mut csv = ctx.header("extend")?;
    let _ = write!(
        csv,
        " method={:?} v_radius={}\nfunction,restriction_exact,local_constant,local_violations,final_constant,final_violations,lp_ratio,tl_gradient_ratio,besov_gradient_ratio,besov_norm_ratio\n",
        params.method, params.v_radius
    );
    let mut failures = Vec::new();
    let mut norm_ratios = Vec::new();
    let mut paths = Vec::new();
    for (i, f) in ctx.functions()?.iter().enumerate() {
        let gs = canonical_gradient(&f.values, &ctx.set, &ctx.space, params.s)?;
        let res = extend_with(
            &f.values,
            &ctx.set,
            &ctx.space,
            &params,
            cover.clone(),
            &pou,
            gs,
        )?;
        let exact = ctx
            .set
            .ids()
            .iter()
            .all(|&x| res.eu[x].to_bits() == f.values[x].to_bits());
        let ratios = extension_ratios(&res, &f.values, &ctx.set, &ctx.space, &params)?;
        let _ = writeln!(
            csv,
            "{},{exact},{:e},{},{:e},{},{:e},{:e},{:e},{:e}",
            f.name,
            res.local_validity.constant,
            res.local_validity.violations,
            res.final_validity.constant,
            res.final_validity.violations,
            ratios.lp,
            ratios.tl_gradient,
            ratios.besov_gradient,
            ratios.besov_norm
        );
        if !exact || res.local_validity.violations > 0 || res.final_validity.violations > 0 {
            failures.push(f.name.clone());
        }
        norm_ratios.push(ratios.besov_norm);
        if i == 0 {
            paths.push(write(&opts.out, "extension.json", &res.to_json()?)?);
        }
    }
    norm_ratios.sort_by(f64::total_cmp);
    let max = norm_ratios.last().copied().unwrap_or(0.0);
    let median = norm_ratios
        .get(norm_ratios.len() / 2)
        .copied()
        .unwrap_or(0.0);
    let _ = writeln!(
        csv,
        "# summary besov_norm_ratio max={max:e} median={median:e}"
    );
    paths.push(write(&opts.out, "extend.csv", &csv)?);
    if failures.is_empty() {
        Ok(paths)
    } else {
        Err(CliError::CheckFailed(format!(
            "extension checks failed for {}",
            failures.join(", ")
        )))
    }
}

/// Measure density report for `S` inside the ambient domain.
pub fn cmd_density(cfg: ExperimentConfig, opts: &RunOptions) -> Result<Vec<PathBuf>, CliError> {
    let ctx = Context::new(cfg, opts)?;
    let spec = ctx
        .cfg
        .density
        .clone()
        .ok_or_else(|| CliError::Config("density section missing".into()))?;
    let radii = log_uniform_radii(spec.r_min, spec.r_max, spec.per_decade)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let report = check_measure_density(&ctx.space, &ctx.set, spec.c_m, &radii)?;
    Ok(vec![write(&opts.out, "density.json", &report.to_json()?)?])
}

/// K-functional profile per function plus a summary of empirical constants.
pub fn cmd_kfunc(cfg: ExperimentConfig, opts: &RunOptions) -> Result<Vec<PathBuf>, CliError> {
    let ctx = Context::new(cfg, opts)?;
    let params = ctx.cfg.smoothness()?;
    let ts = if ctx.cfg.t_grid.is_empty() {
        let (lo, hi) = (2.0 * ctx.space.spacing(), ctx.space.diameter() / 2.0);
        (0..8)
            .map(|i| lo * (hi / lo).powf(f64::from(i) / 7.0))
            .collect()
    } else {
        ctx.cfg.t_grid.clone()
    };
    let grid = ScaleGrid::new(ts.clone())?;
    let header = ctx.header("kfunc")?;
    let mut summary = format!(
        "{header}\nfunction,lower_ratio,upper_ratio,max_overlap,max_h_validity,interpolation_norm\n"
    );
    let mut paths = Vec::new();
    for f in ctx.functions()? {
        let prof = k_profile(&f.values, &ctx.space, params.p, &grid.t)?;
        let interp = grid.integrate(&prof.achieved, params.s, params.q);
        let _ = writeln!(
            summary,
            "{},{:e},{:e},{},{:e},{:e}",
            f.name,
            prof.lower_ratio(),
            prof.upper_ratio(),
            prof.overlap.iter().max().copied().unwrap_or(0),
            prof.validity.iter().copied().fold(0.0, f64::max),
            interp
        );
        let text = format!("{header}\n{}", prof.to_csv());
        paths.push(write(
            &opts.out,
            &format!("kfunc_{}.csv", sanitize(&f.name)),
            &text,
        )?);
    }
    paths.push(write(&opts.out, "kfunc_summary.csv", &summary)?);
    Ok(paths)
}

/// Regularity exponent `Q` from the config or estimated from ball growth.
pub fn dimension_of(space: &MetricMeasureSpace, configured: Option<f64>) -> Result<f64, CliError> {
    if let Some(q) = configured {
        return Ok(q);
    }
    let lo = 2.0 * space.spacing();
    let hi = space.diameter() / 4.0;
    if !(hi > lo) {
        return Err(CliError::Geometry(
            "space too small to estimate its dimension".into(),
        ));
    }
    let radii: Vec<f64> = (0..8)
        .map(|i| lo * (hi / lo).powf(i as f64 / 7.0))
        .collect();
    Ok(estimate_constants(space, &radii)?.q_estimate)
}

/// Lorentz embedding check per function over the whole space.
pub fn cmd_embed(cfg: ExperimentConfig, opts: &RunOptions) -> Result<Vec<PathBuf>, CliError> {
    let ctx = Context::new(cfg, opts)?;
    let params = ctx.cfg.smoothness()?;
    let q_dim = dimension_of(&ctx.space, ctx.cfg.dimension)?;
    if params.s * params.p >= q_dim {
        return Err(CliError::Config(format!(
            "supercritical; embedding check not applicable (sp = {} >= Q = {q_dim})",
            params.s * params.p
        )));
    }
    let mut csv = ctx.header("embed")?;
    let _ = write!(
        csv,
        " dimension={q_dim}\nfunction,p_star,lhs,lhs_weak,nesting_factor,rhs,ratio\n"
    );
    for f in ctx.functions()? {
        let r =
            lorentz_embedding_check(&f.values, &ctx.space, params.s, params.p, params.q, q_dim)?;
        let _ = writeln!(
            csv,
            "{},{:e},{:e},{:e},{:e},{:e},{:e}",
            f.name, r.p_star, r.lhs, r.lhs_weak, r.nesting_factor, r.rhs, r.ratio
        );
    }
    Ok(vec![write(&opts.out, "embed.csv", &csv)?])
}
