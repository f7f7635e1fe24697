//! Slithering models against direct recomputation.

use std::f64::consts::TAU;

use proptest::prelude::*;
use slitherkit::slither::{
    leaf_separation_bound, leaf_separation_bound_refined, tangent_bundle_slithering, torus_fiber_map,
    torus_fiber_map_inverse, torus_slithering, uniformity_probe, verify_bundle_automorphism, z_value,
    UniformityModel,
};
use slitherkit::hyperbolic::genus2_fuchsian;
use slitherkit::Status;

const PAIRS: [(f64, f64); 6] = [(0.0, 0.25), (0.0, 1.0), (0.0, 1.25), (0.0, 2.0), (0.0, 2.25), (0.0, 3.0)];

#[test]
fn separation_fit_is_stable_under_refinement() {
    let model = torus_slithering();
    let coarse = leaf_separation_bound(&model, &PAIRS, 16).unwrap();
    let fine = leaf_separation_bound_refined(&model, &PAIRS, 16, 2).unwrap();
    let zs: Vec<i64> = coarse.rows.iter().map(|r| r.z.abs()).collect();
    assert_eq!(zs, vec![1, 2, 3, 4, 5, 6]);
    for (a, b) in coarse.rows.iter().zip(&fine.rows) {
        assert!((a.separation - b.separation).abs() <= coarse.mesh, "{a:?} {b:?}");
    }
    assert!(coarse.residual <= 0.2 && fine.residual <= 0.2);
    assert!(coarse.c1.is_finite());
    assert!(coarse.rows[3].separation > coarse.rows[0].separation);
}

/// Image of `[0, len]` after `n` holonomy steps, tracked through many
/// interior points.
fn dense_image(len: f64, n: usize, points: usize, forward: bool) -> f64 {
    let mut xs: Vec<f64> = (0..=points).map(|i| len * i as f64 / points as f64).collect();
    for _ in 0..n {
        for x in &mut xs {
            *x = if forward { torus_fiber_map(*x) } else { torus_fiber_map_inverse(*x) };
        }
    }
    xs.windows(2).map(|w| w[1] - w[0]).sum()
}

#[test]
fn torus_holonomy_is_bounded() {
    let r = uniformity_probe(UniformityModel::TorusSlither, 0.1, 50.0).unwrap();
    assert!(r.bounded);
    let oracle = (0..=50)
        .map(|n| dense_image(0.1, n, 128, true).max(dense_image(0.1, n, 128, false)))
        .fold(0.0, f64::max);
    assert!((r.max_length - oracle).abs() < 1e-9, "{} vs {oracle}", r.max_length);
    assert!(oracle < TAU);
}

#[test]
fn anosov_growth_rate() {
    let lambda = (3.0 + 5f64.sqrt()) / 2.0;
    let r20 = uniformity_probe(UniformityModel::LinearAnosovStable, 0.1, 20.0).unwrap();
    let r40 = uniformity_probe(UniformityModel::LinearAnosovStable, 0.1, 40.0).unwrap();
    // oracle: Perron root of the gluing matrix by power iteration
    let mut v: [f64; 2] = [1.0, 0.3];
    let mut ratio = 0.0;
    for _ in 0..60 {
        let w = [2.0 * v[0] + v[1], v[0] + v[1]];
        ratio = w[0].hypot(w[1]) / v[0].hypot(v[1]);
        v = w;
    }
    assert!((ratio - lambda).abs() < 1e-12);
    let g20 = r20.growth_rate.unwrap();
    assert!((g20 - ratio).abs() / ratio < 0.01);
    assert!((r40.growth_rate.unwrap() - g20).abs() / g20 < 0.01);
    assert!(!r20.bounded);
}

#[test]
fn built_in_models_are_bundle_automorphisms() {
    for samples in [2, 7, 24] {
        assert_eq!(verify_bundle_automorphism(&torus_slithering(), samples).status, Status::Pass);
        let tb = tangent_bundle_slithering(&genus2_fuchsian());
        assert_eq!(verify_bundle_automorphism(&tb, samples).status, Status::Pass);
    }
}

proptest! {
    #[test]
    fn z_is_antisymmetric(r in -10.0..10.0f64, t in -10.0..10.0f64) {
        prop_assert_eq!(z_value(r, t), -z_value(t, r));
        prop_assert_eq!(z_value(r, t) % 2 == 0, (t - r).fract() == 0.0);
    }

    #[test]
    fn z_is_nearly_additive(r in -5.0..5.0f64, t in -5.0..5.0f64, u in -5.0..5.0f64) {
        let gap = z_value(r, t) + z_value(t, u) - z_value(r, u);
        prop_assert!(gap.abs() <= 1);
    }

    #[test]
    fn z_is_exactly_additive_on_integer_steps(r in -5.0..5.0f64, a in -4i32..4, b in -4i32..4) {
        let (t, u) = (r + a as f64, r + a as f64 + b as f64);
        prop_assume!(t - r == a as f64 && u - t == b as f64 && u - r == (a + b) as f64);
        prop_assert_eq!(z_value(r, t) + z_value(t, u), z_value(r, u));
    }

    #[test]
    fn deck_maps_preserve_z(x0 in -3.0..3.0f64, y0 in -9.0..9.0f64, x1 in -3.0..3.0f64, y1 in -9.0..9.0f64) {
        let m = torus_slithering();
        let (p, q) = ([x0, y0], [x1, y1]);
        let before = z_value((m.fibration)(&p), (m.fibration)(&q));
        for g in &m.deck {
            let after = z_value((m.fibration)(&(g.apply)(&p)), (m.fibration)(&(g.apply)(&q)));
            prop_assert_eq!(before, after);
        }
    }
}
