use gls_core::calculus::{empirical_tail, gls_norm, MeasuredFunction, TailForm};
use gls_core::{ExponentProfile, GeneratingFunction, Interval, PNormCurve, SupSearch};
use proptest::prelude::*;

/// Curve on `p ∈ [1.5, 1.5 + 1.25·11]` with positive values.
fn curve_strategy() -> impl Strategy<Value = PNormCurve> {
    prop::collection::vec(0.05f64..20.0, 12).prop_map(|vals| {
        let samples = vals
            .iter()
            .enumerate()
            .map(|(j, &v)| (1.5 + 1.25 * j as f64, v))
            .collect();
        PNormCurve::new(samples, "random").unwrap()
    })
}

fn dom(a: f64, b: f64) -> Interval {
    Interval::new(a, b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn extremal_recovers_lr_norm(curve in curve_strategy(), j in 1usize..11) {
        let (r, v) = curve.samples()[j];
        let psi = GeneratingFunction::extremal(r, dom(1.5, 16.0)).unwrap();
        prop_assert_eq!(gls_norm(&curve, &psi).unwrap().value, v);
    }

    #[test]
    fn norm_is_homogeneous(curve in curve_strategy(), c in 0.01f64..100.0) {
        let psi = GeneratingFunction::power(0.5, dom(2.0, 12.0)).unwrap();
        let base = gls_norm(&curve, &psi).unwrap().value;
        let scaled = gls_norm(&curve.scaled(c).unwrap(), &psi).unwrap().value;
        prop_assert!((scaled - c * base).abs() <= 1e-10 * c * base);
    }

    #[test]
    fn norm_decreases_in_psi(curve in curve_strategy(), lo in 0.1f64..5.0, gap in 0.0f64..5.0) {
        let small = GeneratingFunction::constant(lo, dom(2.0, 12.0)).unwrap();
        let large = GeneratingFunction::constant(lo + gap, dom(2.0, 12.0)).unwrap();
        let a = gls_norm(&curve, &small).unwrap().value;
        let b = gls_norm(&curve, &large).unwrap().value;
        prop_assert!(b <= a * (1.0 + 1e-12));
    }

    #[test]
    fn fundamental_function_is_non_decreasing(d1 in 1e-6f64..10.0, factor in 1.0f64..100.0, alpha in 0.0f64..2.0) {
        let search = SupSearch::default();
        for psi in [
            GeneratingFunction::power(alpha, Interval::unbounded(1.0).unwrap()).unwrap(),
            GeneratingFunction::constant(1.0, dom(2.0, 6.0)).unwrap(),
        ] {
            let a = search.fundamental_function(&psi, d1).unwrap().value;
            let b = search.fundamental_function(&psi, d1 * factor).unwrap().value;
            prop_assert!(b >= a * (1.0 - 1e-12), "{} -> {}", a, b);
        }
    }

    #[test]
    fn young_fenchel_is_convex(u1 in 0.6f64..4.0, u2 in 0.6f64..4.0) {
        let psi = GeneratingFunction::subgaussian(Interval::unbounded(1.0).unwrap()).unwrap();
        let search = SupSearch::default();
        let h = |u: f64| search.young_fenchel(&psi, u).unwrap().value;
        let mid = h(0.5 * (u1 + u2));
        prop_assert!(mid <= 0.5 * (h(u1) + h(u2)) * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn mu_is_monotone_and_continuous(d in 2u32..=10, s1 in 0.0f64..0.5, s2 in 0.0f64..0.5) {
        let prof = ExponentProfile::new(d).unwrap();
        let p = |s: f64| if s == 0.0 { f64::INFINITY } else { 1.0 / s };
        let (lo, hi) = if s1 > s2 { (s1, s2) } else { (s2, s1) };
        prop_assume!(lo < 0.5);
        prop_assert!(prof.mu(p(hi)).unwrap() >= prof.mu(p(lo)).unwrap() - 1e-15);
        let pc = prof.critical_exponent();
        let gap = (prof.mu(pc * (1.0 + 1e-9)).unwrap() - prof.mu(pc).unwrap()).abs();
        prop_assert!(gap < 1e-8);
    }

    #[test]
    fn chebyshev_tail_dominates(values in prop::collection::vec(0.0f64..10.0, 2..40), seed in 1u64..1000) {
        let weights: Vec<f64> = (0..values.len()).map(|i| 0.1 + ((i as u64 * seed) % 7) as f64).collect();
        let f = MeasuredFunction::new(values, weights).unwrap();
        prop_assume!(f.p_norm(2.0) > 0.0);
        let ps: Vec<f64> = (0..=32).map(|i| 1.0 / (0.5 - i as f64 * (0.5 - 1.0 / 6.0) / 32.0)).collect();
        let curve = PNormCurve::new(ps.iter().map(|&p| (p, f.p_norm(p))).collect(), "step").unwrap();
        let psi = GeneratingFunction::constant(1.0, dom(2.0, 6.0)).unwrap();
        let g = gls_norm(&curve, &psi).unwrap().value;
        let us: Vec<f64> = (1..=20).map(|i| g * (1.0 + 0.25 * i as f64)).collect();
        let tail = empirical_tail(&f, &us).unwrap();
        let search = SupSearch::default();
        for pt in &tail.points {
            let bound = search.tail_bound(&psi, g, pt.u, TailForm::Chebyshev).unwrap();
            prop_assert!(pt.tail <= bound * (1.0 + 1e-9), "u = {}: {} > {}", pt.u, pt.tail, bound);
        }
    }
}

#[test]
fn constant_psi_tail_is_a_power() {
    // ψ ≡ 1 on (2,6): h(v) = 6v for v ≥ 0, so the bound is (g/u)^6
    let psi = GeneratingFunction::constant(1.0, dom(2.0, 6.0)).unwrap();
    let b = SupSearch::default()
        .tail_bound(&psi, 1.0, 1.5, TailForm::Chebyshev)
        .unwrap();
    assert!((b - (2.0f64 / 3.0).powi(6)).abs() < 1e-12);
}

#[test]
fn subgaussian_conjugate_closed_form() {
    let psi = GeneratingFunction::subgaussian(Interval::unbounded(1.0).unwrap()).unwrap();
    let h = SupSearch::default().young_fenchel(&psi, 1.0).unwrap();
    assert!((h.value - 0.5 * 1f64.exp()).abs() < 1e-10);
    assert!((h.arg - 1f64.exp()).abs() < 1e-4);
}
