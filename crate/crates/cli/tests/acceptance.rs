//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use besovkit_cli::functions::random_smooth;
use besovkit_core::cover::{net_cover, net_partition, partition_of_unity, whitney_cover};
use besovkit_core::extend::{extend_with, ExtensionMethod, ExtensionParams};
use besovkit_core::geometry::{
    check_region_density, log_uniform_radii, make_carpet, make_cusp, make_slit_disc,
    positive_measure_fractions,
};
use besovkit_core::interp::{k_profile, lorentz_embedding_check};
use besovkit_core::median::median_defect;
use besovkit_core::norms::{
    besov_modulus_norms, canonical_gradient, infimum_gradient, sequence_norm, tl_function_norm,
    validity_constant, OracleKind, SequenceNorm, TlVariant,
};
use besovkit_core::space::estimate_constants;
use besovkit_core::{
    Bbox, Exponent, MetricMeasureSpace, PartitionOfUnity, Region, ScaleGrid, SmoothnessParams,
    SubsetMask, WeightedSample, WhitneyCover,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

#[derive(Default)]
struct Shared {
    extension_instances: usize,
    extension_violations: usize,
    extension_worst_constant: f64,
    grid_instances: Vec<(MetricMeasureSpace, SubsetMask)>,
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn grid(h: f64, lo: f64, hi: f64) -> MetricMeasureSpace {
    MetricMeasureSpace::build_grid(&Region::Full, h, &Bbox::cube(lo, hi, 2)).unwrap()
}

fn rough(space: &MetricMeasureSpace, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..space.len()).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn corpus_function(space: &MetricMeasureSpace, seed: u64) -> Vec<f64> {
    if seed % 5 == 4 {
        rough(space, seed)
    } else {
        random_smooth(space, seed, 4).unwrap()
    }
}

fn regular_sets() -> Vec<(&'static str, Region)> {
    vec![
        ("square", Region::closed_box(&[0.0, 0.0], &[1.0, 1.0])),
        (
            "carpet",
            make_carpet(2, &positive_measure_fractions(2)).unwrap(),
        ),
        (
            "strip",
            Region::HalfSpace {
                axis: 1,
                threshold: 0.5,
            },
        ),
    ]
}

fn verify_whitney(
    cover: &WhitneyCover,
    pou: &PartitionOfUnity,
    space: &MetricMeasureSpace,
    set: &SubsetMask,
) -> Result<(), String> {
    cover
        .check_invariants(space, set)
        .map_err(|e| e.to_string())?;
    cover
        .check_neighbor_comparability(space)
        .map_err(|e| e.to_string())?;
    pou.check_properties(
        space,
        &cover.centers,
        &set.complement(),
        1.0 / cover.overlap_bound as f64,
    )
    .map_err(|e| e.to_string())?;
    let lip = pou.lipschitz_ratio(space, 7);
    ensure(lip <= 1.0 + 1e-12, || {
        format!("partition Lipschitz ratio {lip} exceeds 1")
    })
}

fn restriction_identity(shared: &mut Shared) -> Outcome {
    let space = grid(0.0625, -1.0, 2.0);
    let params = ExtensionParams::defaults(0.5, 2.0, Exponent::Finite(2.0));
    let mut runs = 0;
    for (name, region) in regular_sets() {
        let set = SubsetMask::from_region(&space, &region).map_err(|e| e.to_string())?;
        let cover = whitney_cover(&space, &set).map_err(|e| e.to_string())?;
        let pou = partition_of_unity(&cover, &space, &set).map_err(|e| e.to_string())?;
        verify_whitney(&cover, &pou, &space, &set).map_err(|e| format!("{name}: {e}"))?;
        for seed in 0..50u64 {
            let u = corpus_function(&space, 100 + seed);
            let gs = canonical_gradient(&u, &set, &space, params.s).map_err(|e| e.to_string())?;
            let r = extend_with(&u, &set, &space, &params, cover.clone(), &pou, gs)
                .map_err(|e| e.to_string())?;
            for &x in set.ids() {
                ensure(r.eu[x].to_bits() == u[x].to_bits(), || {
                    format!("{name} seed {seed}: Eu({x}) = {} but u = {}", r.eu[x], u[x])
                })?;
            }
            shared.extension_instances += 1;
            shared.extension_violations +=
                r.local_validity.violations + r.final_validity.violations;
            for c in [r.local_validity.constant, r.final_validity.constant] {
                shared.extension_worst_constant = shared.extension_worst_constant.max(c);
            }
            runs += 1;
        }
        shared.grid_instances.push((space.clone(), set));
    }
    Ok(format!("{runs} extensions, bitwise equal on S"))
}

fn median_deviation_bound(_: &mut Shared) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for trial in 0..10_000 {
        let n = rng.gen_range(1..40);
        let values: Vec<f64> = (0..n)
            .map(|_| {
                let v: f64 = rng.gen_range(-5.0..5.0);
                if rng.gen_bool(0.3) {
                    v.round()
                } else {
                    v
                }
            })
            .collect();
        let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..2.0)).collect();
        let sample = WeightedSample::new(values, weights).map_err(|e| e.to_string())?;
        let c = rng.gen_range(-6.0..6.0);
        let eta = rng.gen_range(0.05..=1.0);
        let (lhs, rhs) = median_defect(&sample, c, eta).map_err(|e| e.to_string())?;
        ensure(lhs <= rhs * (1.0 + 1e-12), || {
            format!("trial {trial}: {lhs} > {rhs}")
        })?;
        if rhs > 0.0 {
            worst = worst.max(lhs / rhs);
        }
    }
    Ok(format!("10000 triples, max lhs/rhs = {worst:.4}"))
}

fn whitney_invariants(_: &mut Shared) -> Outcome {
    let mut covers = 0;
    for h in [0.125, 0.0625, 0.03125] {
        let space = grid(h, -1.0, 2.0);
        for (name, region) in regular_sets() {
            let set = SubsetMask::from_region(&space, &region).map_err(|e| e.to_string())?;
            let cover = whitney_cover(&space, &set).map_err(|e| e.to_string())?;
            let pou = partition_of_unity(&cover, &space, &set).map_err(|e| e.to_string())?;
            verify_whitney(&cover, &pou, &space, &set).map_err(|e| format!("{name} h={h}: {e}"))?;
            covers += 1;
        }
    }
    // a cusp, where Whitney balls shrink towards the tip
    let space = grid(0.03125, -1.0, 2.0);
    let set =
        SubsetMask::from_region(&space, &make_cusp(2.0).unwrap()).map_err(|e| e.to_string())?;
    let cover = whitney_cover(&space, &set).map_err(|e| e.to_string())?;
    let pou = partition_of_unity(&cover, &space, &set).map_err(|e| e.to_string())?;
    verify_whitney(&cover, &pou, &space, &set).map_err(|e| format!("cusp: {e}"))?;
    covers += 1;
    // whole-space nets used by the K-functional decomposition
    let space = grid(0.0625, 0.0, 1.0);
    for radius in [0.02, 0.05, 0.1, 0.2] {
        let net = net_cover(&space, radius).map_err(|e| e.to_string())?;
        let pou = net_partition(&net, &space).map_err(|e| e.to_string())?;
        pou.check_properties(
            &space,
            &net.centers,
            &SubsetMask::full(space.len()),
            1.0 / net.overlap as f64,
        )
        .map_err(|e| format!("net radius {radius}: {e}"))?;
        let lip = pou.lipschitz_ratio(&space, 3);
        ensure(lip <= 1.0 + 1e-12, || {
            format!("net radius {radius}: Lipschitz ratio {lip}")
        })?;
        covers += 1;
    }
    Ok(format!("{covers} covers, zero failures"))
}

fn gradient_validity(shared: &mut Shared) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut pairs = 0;
    for inst in 0..50 {
        let n = rng.gen_range(10..80);
        let mut pts: Vec<Vec<f64>> = Vec::new();
        while pts.len() < n {
            let p = vec![rng.gen_range(0.0..3.0), rng.gen_range(0.0..3.0)];
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..2.0)).collect();
        let space = MetricMeasureSpace::from_cloud(&pts, &w).map_err(|e| e.to_string())?;
        let mut members: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.6)).collect();
        members[0] = true;
        members[1] = true;
        let set = SubsetMask::from_members(members);
        let s = rng.gen_range(0.05..0.95);
        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let gs = canonical_gradient(&u, &set, &space, s).map_err(|e| e.to_string())?;
        let v = validity_constant(&u, &gs, &set, &space).map_err(|e| e.to_string())?;
        ensure(v.violations == 0 && v.constant <= 1.0 + 1e-12, || {
            format!(
                "instance {inst}: constant {} with {} violations",
                v.constant, v.violations
            )
        })?;
        pairs += v.pairs;
    }
    ensure(shared.extension_instances > 0, || {
        "no extension instances recorded".into()
    })?;
    ensure(shared.extension_violations == 0, || {
        format!(
            "{} hard violations across extensions",
            shared.extension_violations
        )
    })?;
    ensure(shared.extension_worst_constant.is_finite(), || {
        "infinite extension constant".into()
    })?;
    Ok(format!(
        "{pairs} pairs exact; {} extensions with max constant {:.3} and no hard violations",
        shared.extension_instances, shared.extension_worst_constant
    ))
}

fn oracle_sandwich(_: &mut Shared) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 1.0;
    let mut solved = 0;
    for inst in 0..30 {
        let n = rng.gen_range(4..=16);
        let mut pts: Vec<Vec<f64>> = Vec::new();
        while pts.len() < n {
            let p = vec![rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0)];
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..1.5)).collect();
        let space = MetricMeasureSpace::from_cloud(&pts, &w).map_err(|e| e.to_string())?;
        let set = SubsetMask::full(n);
        let u = random_smooth(&space, 500 + inst as u64, 3).map_err(|e| e.to_string())?;
        let p = if inst % 2 == 0 { 1.0 } else { 2.0 };
        let q = if inst % 3 == 0 {
            Exponent::Infinite
        } else {
            Exponent::Finite(p)
        };
        let s = [0.3, 0.5, 0.7][inst % 3];
        let params = SmoothnessParams::new(s, p, q).map_err(|e| e.to_string())?;
        let gs = canonical_gradient(&u, &set, &space, s).map_err(|e| e.to_string())?;
        for (kind, seq) in [
            (OracleKind::TriebelLizorkin, SequenceNorm::LpLq),
            (OracleKind::Besov, SequenceNorm::LqLp),
        ] {
            let canon = sequence_norm(&gs, &set, &space, p, q, seq);
            let (opt, g) =
                infimum_gradient(&u, &set, &space, &params, kind).map_err(|e| e.to_string())?;
            let v = validity_constant(&u, &g, &set, &space).map_err(|e| e.to_string())?;
            ensure(v.violations == 0 && v.constant <= 1.0 + 1e-6, || {
                format!(
                    "instance {inst} {kind:?}: oracle gradient invalid (C = {})",
                    v.constant
                )
            })?;
            ensure(opt <= canon * (1.0 + 1e-9), || {
                format!("instance {inst} {kind:?}: {opt} > {canon}")
            })?;
            if opt > 0.0 {
                worst = worst.max(canon / opt);
            }
            solved += 1;
        }
    }
    ensure(worst <= 4.0, || {
        format!("canonical/oracle ratio {worst:.3} exceeds 4")
    })?;
    Ok(format!(
        "{solved} programs, max canonical/oracle = {worst:.3}"
    ))
}

fn norm_chains(shared: &mut Shared) -> Outcome {
    let mut instances: Vec<(MetricMeasureSpace, SubsetMask)> =
        std::mem::take(&mut shared.grid_instances);
    for h in [0.125, 0.0625] {
        let sq = grid(h, 0.0, 1.0);
        let n = sq.len();
        instances.push((sq.clone(), SubsetMask::full(n)));
        let carpet = SubsetMask::from_region(
            &sq,
            &make_carpet(2, &positive_measure_fractions(2)).unwrap(),
        )
        .map_err(|e| e.to_string())?;
        instances.push((sq, carpet));
    }
    let line = MetricMeasureSpace::build_grid(&Region::Full, 1.0 / 64.0, &Bbox::cube(0.0, 1.0, 1))
        .unwrap();
    let n = line.len();
    instances.push((line, SubsetMask::full(n)));
    let grid_scales = ScaleGrid::dyadic(0, 4).map_err(|e| e.to_string())?;
    let param_sets = [
        (0.5, 2.0, Exponent::Finite(2.0)),
        (0.3, 1.0, Exponent::Infinite),
        (0.7, 0.5, Exponent::Finite(1.0)),
        (0.5, 1.5, Exponent::Finite(0.8)),
    ];
    let mut checks = 0;
    for (idx, (space, set)) in instances.iter().enumerate() {
        for (j, &(s, p, q)) in param_sets.iter().enumerate() {
            let params = SmoothnessParams::new(s, p, q).map_err(|e| e.to_string())?;
            let u = corpus_function(space, (idx * 10 + j) as u64);
            let b = besov_modulus_norms(&u, space, set, &params, &grid_scales)
                .map_err(|e| e.to_string())?;
            let big_b = b.b.ok_or("grid instance without translation modulus")?;
            let cal_f = tl_function_norm(&u, space, set, &params, TlVariant::CalF, &grid_scales)
                .map_err(|e| e.to_string())?;
            let hat_f = tl_function_norm(&u, space, set, &params, TlVariant::HatF, &grid_scales)
                .map_err(|e| e.to_string())?;
            let le = |a: f64, c: f64| a <= c * (1.0 + 1e-12);
            ensure(le(b.hat_b, b.cal_b) && le(b.cal_b, big_b), || {
                format!(
                    "instance {idx} params {j}: hatB {} calB {} B {big_b}",
                    b.hat_b, b.cal_b
                )
            })?;
            ensure(le(hat_f, cal_f), || {
                format!("instance {idx} params {j}: hatF {hat_f} > calF {cal_f}")
            })?;
            checks += 1;
        }
    }
    Ok(format!("{checks} grid instances, both chains hold"))
}

fn k_constants(h: f64, ts: &[f64]) -> Result<(f64, f64), String> {
    let space = grid(h, 0.0, 1.0);
    let (mut c1, mut c2) = (0.0f64, 0.0f64);
    for seed in 0..20u64 {
        let f = random_smooth(&space, 700 + seed, 4).map_err(|e| e.to_string())?;
        let prof = k_profile(&f, &space, 2.0, ts).map_err(|e| e.to_string())?;
        c1 = c1.max(prof.lower_ratio());
        c2 = c2.max(prof.upper_ratio());
    }
    Ok((c1, c2))
}

fn k_bracket(_: &mut Shared) -> Outcome {
    let ts: Vec<f64> = (0..8)
        .map(|i| 0.125 * (5.6f64).powf(f64::from(i) / 7.0))
        .collect();
    let (a1, a2) = k_constants(0.0625, &ts)?;
    let (b1, b2) = k_constants(0.03125, &ts)?;
    let stable = |x: f64, y: f64| {
        x.is_finite() && y.is_finite() && x > 0.0 && y > 0.0 && x.max(y) / x.min(y) < 2.0
    };
    ensure(stable(a1, b1), || format!("C1 moved from {a1} to {b1}"))?;
    ensure(stable(a2, b2), || format!("C2 moved from {a2} to {b2}"))?;
    Ok(format!(
        "C1 {a1:.3} -> {b1:.3}, C2 {a2:.3} -> {b2:.3} under h -> h/2"
    ))
}

fn embedding_ratios(h: f64) -> Result<(f64, Vec<f64>), String> {
    let space = grid(h, 0.0, 1.0);
    let lo = 2.0 * h;
    let radii: Vec<f64> = (0..8)
        .map(|i| lo * (0.35 / lo).powf(f64::from(i) / 7.0))
        .collect();
    let q_dim = estimate_constants(&space, &radii)
        .map_err(|e| e.to_string())?
        .q_estimate;
    let mut out = Vec::new();
    for seed in 0..20u64 {
        let u = random_smooth(&space, 900 + seed, 4).map_err(|e| e.to_string())?;
        let r = lorentz_embedding_check(&u, &space, 0.5, 1.0, Exponent::Finite(1.0), q_dim)
            .map_err(|e| e.to_string())?;
        ensure(r.ratio.is_finite() && r.ratio > 0.0, || {
            format!("seed {seed}: ratio {}", r.ratio)
        })?;
        ensure(
            r.lhs_weak <= r.nesting_factor.max(1.0) * r.lhs * (1.0 + 1e-9),
            || format!("seed {seed}: weak norm {} above nesting bound", r.lhs_weak),
        )?;
        out.push(r.ratio);
    }
    Ok((q_dim, out))
}

fn lorentz_embedding(_: &mut Shared) -> Outcome {
    let (qa, coarse) = embedding_ratios(0.0625)?;
    let (qb, fine) = embedding_ratios(0.03125)?;
    let mut worst: f64 = 1.0;
    for (a, b) in coarse.iter().zip(&fine) {
        worst = worst.max(a.max(*b) / a.min(*b));
    }
    ensure(worst < 2.0, || {
        format!("ratio moved by factor {worst:.3} under refinement")
    })?;
    let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    Ok(format!(
        "Q {qa:.3}/{qb:.3}, max ratio {:.4} -> {:.4}, worst per-function change {worst:.3}",
        max(&coarse),
        max(&fine)
    ))
}

fn density_discrimination(_: &mut Shared) -> Outcome {
    let radii = log_uniform_radii(0.07, 1.0, 16).map_err(|e| e.to_string())?;
    let unit = Bbox::cube(0.0, 1.0, 2);
    let mut notes = Vec::new();
    for (name, region, bbox) in [
        (
            "square",
            Region::closed_box(&[0.0, 0.0], &[1.0, 1.0]),
            unit.clone(),
        ),
        (
            "carpet",
            make_carpet(3, &positive_measure_fractions(3)).unwrap(),
            unit.clone(),
        ),
        ("slit disc", make_slit_disc(), Bbox::cube(-1.0, 1.0, 2)),
    ] {
        for h in [1.0 / 32.0, 1.0 / 64.0] {
            let r =
                check_region_density(&region, &bbox, h, 0.05, &radii).map_err(|e| e.to_string())?;
            ensure(r.passed, || {
                format!("{name} h={h}: worst ratio {}", r.worst_ratio)
            })?;
            if h < 0.02 {
                notes.push(format!("{name} {:.3}", r.worst_ratio));
            }
        }
    }
    let cusp = make_cusp(2.0).unwrap();
    let cusp_box = Bbox::new(&[0.0, -1.0], &[1.0, 1.0]);
    let coarse = check_region_density(&cusp, &cusp_box, 1.0 / 32.0, 0.05, &radii)
        .map_err(|e| e.to_string())?;
    let fine = check_region_density(&cusp, &cusp_box, 1.0 / 64.0, 0.05, &radii)
        .map_err(|e| e.to_string())?;
    ensure(fine.worst_ratio < coarse.worst_ratio, || {
        format!(
            "cusp worst ratio did not decrease: {} -> {}",
            coarse.worst_ratio, fine.worst_ratio
        )
    })?;
    notes.push(format!(
        "cusp {:.4} -> {:.4}",
        coarse.worst_ratio, fine.worst_ratio
    ));
    Ok(notes.join(", "))
}

fn average_linearity(_: &mut Shared) -> Outcome {
    let space = grid(0.0625, -1.0, 2.0);
    let set = SubsetMask::from_region(&space, &Region::closed_box(&[0.0, 0.0], &[1.0, 1.0]))
        .map_err(|e| e.to_string())?;
    let params = ExtensionParams::defaults(0.5, 2.0, Exponent::Finite(2.0))
        .with_method(ExtensionMethod::Average);
    let cover = whitney_cover(&space, &set).map_err(|e| e.to_string())?;
    let pou = partition_of_unity(&cover, &space, &set).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let ext = |u: &[f64]| -> Result<Vec<f64>, String> {
        let gs = canonical_gradient(u, &set, &space, params.s).map_err(|e| e.to_string())?;
        Ok(
            extend_with(u, &set, &space, &params, cover.clone(), &pou, gs)
                .map_err(|e| e.to_string())?
                .eu,
        )
    };
    let mut worst: f64 = 0.0;
    for pair in 0..10u64 {
        let u = corpus_function(&space, 300 + 2 * pair);
        let v = corpus_function(&space, 301 + 2 * pair);
        let (a, b) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let w: Vec<f64> = u.iter().zip(&v).map(|(x, y)| a * x + b * y).collect();
        let (eu, ev, ew) = (ext(&u)?, ext(&v)?, ext(&w)?);
        let scale = eu.iter().chain(&ev).fold(0.0f64, |m, x| m.max(x.abs())) * (a.abs() + b.abs());
        for x in 0..space.len() {
            let err = (ew[x] - (a * eu[x] + b * ev[x])).abs() / scale.max(f64::MIN_POSITIVE);
            worst = worst.max(err);
        }
    }
    ensure(worst <= 1e-12, || format!("superposition error {worst:e}"))?;
    Ok(format!(
        "10 pairs, max relative superposition error {worst:.2e}"
    ))
}

fn run_cli_suite(out: &Path) -> Result<(), String> {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for (cmd, cfg) in [
        ("norms", "norms_square"),
        ("extend", "extend_square"),
        ("density", "density_carpet"),
        ("density", "density_cusp"),
        ("kfunc", "kfunc_square"),
        ("embed", "embed_square"),
    ] {
        let status = Command::new(env!("CARGO_BIN_EXE_besovkit"))
            .args([cmd, "--config"])
            .arg(configs.join(format!("{cfg}.json")))
            .arg("--out")
            .arg(out.join(cfg))
            .args(["--seed", "42"])
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), || {
            format!(
                "{cmd} {cfg} failed: {}",
                String::from_utf8_lossy(&status.stderr)
            )
        })?;
    }
    Ok(())
}

fn files_under(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).into_iter().flatten().flatten() {
            let p = entry.path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push(p.strip_prefix(dir).unwrap().to_path_buf());
            }
        }
    }
    out.sort();
    out
}

fn determinism(_: &mut Shared) -> Outcome {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    run_cli_suite(a.path())?;
    run_cli_suite(b.path())?;
    let (fa, fb) = (files_under(a.path()), files_under(b.path()));
    ensure(fa == fb && !fa.is_empty(), || {
        "runs produced different file sets".into()
    })?;
    for f in &fa {
        let x = std::fs::read(a.path().join(f)).map_err(|e| e.to_string())?;
        let y = std::fs::read(b.path().join(f)).map_err(|e| e.to_string())?;
        ensure(x == y, || format!("{} differs between runs", f.display()))?;
    }
    Ok(format!("{} output files byte-identical", fa.len()))
}

type Criterion = (&'static str, fn(&mut Shared) -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("restriction identity", restriction_identity),
        ("median deviation bound", median_deviation_bound),
        ("Whitney invariants", whitney_invariants),
        ("gradient validity", gradient_validity),
        ("oracle sandwich", oracle_sandwich),
        ("norm chains", norm_chains),
        ("K-functional bracket", k_bracket),
        ("Lorentz embedding", lorentz_embedding),
        ("measure density discrimination", density_discrimination),
        ("average-extension linearity", average_linearity),
        ("determinism", determinism),
    ];
    let mut shared = Shared::default();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f(&mut shared);
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(reason) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {reason} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
