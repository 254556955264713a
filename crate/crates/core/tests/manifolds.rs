use std::f64::consts::PI;

use gls_core::calculus::moment_generating;
use gls_core::manifolds::{
    p_norm, p_norm_curve, EigenDescriptor, HarmonicKind, NormConfig, Point, QuadratureGrid,
    SphereHarmonic,
};
use gls_core::Eigenfunction;
use proptest::prelude::*;

/// Relative L² defect of `Δf + λ²f` on a colatitude grid, by central differences.
/// `m` is the azimuthal frequency; the modulus is passed as a function of θ.
fn laplace_defect(f: impl Fn(f64) -> f64, lambda: f64, m: f64) -> f64 {
    let h = 1e-4;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 1..400 {
        let t = 0.05 + (PI - 0.1) * i as f64 / 400.0;
        let (fm, f0, fp) = (f(t - h), f(t), f(t + h));
        let d1 = (fp - fm) / (2.0 * h);
        let d2 = (fp - 2.0 * f0 + fm) / (h * h);
        let lap = d2 + d1 / t.tan() - m * m / t.sin().powi(2) * f0;
        num += (lap + lambda * lambda * f0).powi(2);
        den += (lambda * lambda * f0).powi(2);
    }
    (num / den).sqrt()
}

#[test]
fn finite_difference_laplacian_smoke() {
    for k in [1u32, 2, 5, 10] {
        let z = Eigenfunction::zonal(k).unwrap();
        let defect = laplace_defect(|t| z.eval(&Point::sphere(t, 0.0)), z.lambda(), 0.0);
        assert!(defect < 1e-4, "zonal k={k}: {defect:e}");
        let h = Eigenfunction::highest_weight(k).unwrap();
        let defect = laplace_defect(|t| h.eval(&Point::sphere(t, 0.0)), h.lambda(), k as f64);
        assert!(defect < 1e-4, "highest weight k={k}: {defect:e}");
    }
}

#[test]
fn unit_l2_norm_up_to_degree_128() {
    let cfg = NormConfig::default();
    for k in (1..=128).step_by(7).chain([128]) {
        for e in [
            Eigenfunction::zonal(k).unwrap(),
            Eigenfunction::highest_weight(k).unwrap(),
        ] {
            let l2 = p_norm(&e, 2.0, &cfg).unwrap();
            assert!((l2 - 1.0).abs() < 1e-9, "{}: {l2}", e.label());
        }
    }
    for n in [(1, 0), (3, 4), (17, -2)] {
        assert!(
            (p_norm(&Eigenfunction::torus(n).unwrap(), 2.0, &cfg).unwrap() - 1.0).abs() < 1e-14
        );
    }
}

/// `∫₀^π sin^{2m+1}` by its product formula `Π_{j≤m} 2j/(2j+1) · 2`, in logs.
fn ln_wallis(m: u32) -> f64 {
    2f64.ln()
        + (1..=m)
            .map(|j| (2.0 * j as f64).ln() - (2.0 * j as f64 + 1.0).ln())
            .sum::<f64>()
}

#[test]
fn highest_weight_even_norms_match_wallis() {
    let cfg = NormConfig::default();
    for k in [1u32, 3, 16, 40, 64] {
        let e = Eigenfunction::highest_weight(k).unwrap();
        let ln_c = -0.5 * ((2.0 * PI).ln() + ln_wallis(k));
        for p in [2u32, 4, 6, 8] {
            let want =
                ((p as f64 * ln_c + (2.0 * PI).ln() + ln_wallis(p * k / 2)) / p as f64).exp();
            let got = p_norm(&e, p as f64, &cfg).unwrap();
            assert!(
                ((got - want) / want).abs() < 1e-8,
                "k={k} p={p}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn norm_curves_are_log_convex() {
    let ps: Vec<f64> = [
        1.0,
        1.5,
        2.0,
        2.5,
        3.0,
        4.0,
        5.0,
        6.0,
        8.0,
        10.0,
        14.0,
        20.0,
        f64::INFINITY,
    ]
    .to_vec();
    for e in [
        Eigenfunction::zonal(5).unwrap(),
        Eigenfunction::zonal(24).unwrap(),
        Eigenfunction::highest_weight(20).unwrap(),
        Eigenfunction::torus((2, 3)).unwrap(),
    ] {
        let curve = p_norm_curve(&e, &ps, &NormConfig::default()).unwrap();
        assert!(curve.is_log_convex(1e-9), "{}", e.label());
    }
}

#[test]
fn adaptive_norm_agrees_with_a_finer_grid() {
    let cfg = NormConfig::default();
    for (k, p) in [(16u32, 3.0), (64, 2.5), (128, 7.0)] {
        let e = Eigenfunction::zonal(k).unwrap();
        let breaks = SphereHarmonic::new(k, HarmonicKind::Zonal)
            .unwrap()
            .nodal_cosines();
        let fine = QuadratureGrid::sphere_split(128, &breaks)
            .unwrap()
            .p_norm(&e, p)
            .unwrap();
        let adaptive = p_norm(&e, p, &cfg).unwrap();
        assert!(((adaptive - fine) / fine).abs() < 1e-7, "k={k} p={p}");
    }
    let h = Eigenfunction::highest_weight(100).unwrap();
    let fine = QuadratureGrid::sphere(2048)
        .unwrap()
        .p_norm(&h, 3.3)
        .unwrap();
    assert!(((p_norm(&h, 3.3, &cfg).unwrap() - fine) / fine).abs() < 1e-7);
}

#[test]
fn mgf_is_stable_under_refinement() {
    let e = Eigenfunction::zonal(8).unwrap();
    let breaks = SphereHarmonic::new(8, HarmonicKind::Zonal)
        .unwrap()
        .nodal_cosines();
    let coarse = QuadratureGrid::sphere_split(32, &breaks)
        .unwrap()
        .sample_rows(&e)
        .unwrap();
    let fine = QuadratureGrid::sphere_split(64, &breaks)
        .unwrap()
        .sample_rows(&e)
        .unwrap();
    for z in [-5.0, -1.0, 0.0, 1.0, 5.0, 40.0] {
        let a = moment_generating(&coarse, z).unwrap();
        let b = moment_generating(&fine, z).unwrap();
        assert!(((a - b) / b).abs() < 1e-10, "z={z}: {a} vs {b}");
    }
    assert!((moment_generating(&fine, 0.0).unwrap() - 4.0 * PI).abs() < 1e-12);
}

#[test]
fn descriptors_round_trip_through_json() {
    for e in [
        Eigenfunction::zonal(8).unwrap(),
        Eigenfunction::highest_weight(3).unwrap(),
        Eigenfunction::torus((2, -5)).unwrap(),
    ] {
        let json = serde_json::to_string(&e.descriptor()).unwrap();
        let back: EigenDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(Eigenfunction::try_from(&back).unwrap(), e);
    }
    let json = serde_json::to_string(&Eigenfunction::zonal(8).unwrap().descriptor()).unwrap();
    assert_eq!(json, r#"{"manifold":"sphere","kind":"zonal","k":8}"#);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sup_norm_bounds_every_point(k in 1u32..200, t in 0.0f64..PI, zonal in any::<bool>()) {
        let e = if zonal { Eigenfunction::zonal(k) } else { Eigenfunction::highest_weight(k) }.unwrap();
        prop_assert!(e.eval(&Point::sphere(t, 0.0)).abs() <= e.sup_norm() * (1.0 + 1e-12));
    }

    #[test]
    fn torus_norms_are_frequency_independent(a in -50i32..50, b in -50i32..50, p in 1.0f64..30.0) {
        prop_assume!((a, b) != (0, 0));
        let e = Eigenfunction::torus((a, b)).unwrap();
        let base = Eigenfunction::torus((1, 0)).unwrap();
        let cfg = NormConfig::default();
        prop_assert_eq!(p_norm(&e, p, &cfg).unwrap(), p_norm(&base, p, &cfg).unwrap());
    }
}
