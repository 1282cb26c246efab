use besovkit_core::extend::extend;
use besovkit_core::geometry::{check_measure_density, log_uniform_radii};
use besovkit_core::interp::k_profile;
use besovkit_core::{Bbox, Exponent, ExtensionParams, MetricMeasureSpace, Region, SubsetMask};

fn patch() -> MetricMeasureSpace {
    MetricMeasureSpace::build_grid(&Region::Full, 1.0 / 16.0, &Bbox::cube(-1.0, 2.0, 2)).unwrap()
}

#[test]
fn half_plane_extension_of_a_coordinate() {
    let space = patch();
    let set = SubsetMask::from_fn(&space, |i| space.coords(i).unwrap()[0] <= 0.5);
    let u: Vec<f64> = (0..space.len())
        .map(|i| space.coords(i).unwrap()[1])
        .collect();
    let params = ExtensionParams::defaults(0.5, 2.0, Exponent::Finite(2.0));
    let result = extend(&u, &set, &space, &params).unwrap();
    for &x in set.ids() {
        assert_eq!(result.eu[x], u[x]);
    }
    assert_eq!(result.local_validity.violations, 0);
    assert_eq!(result.final_validity.violations, 0);
    // Values outside S come from medians of values inside S.
    let (lo, hi) = (-1.0, 2.0);
    assert!(result.etilde.iter().all(|v| (lo..=hi).contains(v)));
}

#[test]
fn box_in_patch_is_measure_dense_and_profile_brackets() {
    let space = patch();
    let set = SubsetMask::from_fn(&space, |i| {
        let c = space.coords(i).unwrap();
        (0.0..=1.0).contains(&c[0]) && (0.0..=1.0).contains(&c[1])
    });
    let radii = log_uniform_radii(0.15, 1.0, 16).unwrap();
    let report = check_measure_density(&space, &set, 0.2, &radii).unwrap();
    assert!(report.passed, "{}", report.worst_ratio);

    let f: Vec<f64> = (0..space.len())
        .map(|i| {
            let c = space.coords(i).unwrap();
            c[0] * c[0] - c[1]
        })
        .collect();
    let prof = k_profile(&f, &space, 2.0, &[0.2, 0.4, 0.8]).unwrap();
    for i in 0..prof.t.len() {
        assert!(prof.lower[i] <= prof.achieved[i] * 1.5);
        assert!(prof.achieved[i] > 0.0);
    }
    assert_eq!(prof.validity_violations, 0);
}
