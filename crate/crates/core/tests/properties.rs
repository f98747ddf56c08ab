use fracyam::compactify::{build_compactification, conformal_factor, energy, weighted_j, Bump, CompactKind};
use fracyam::geometry::{linspace, make_warped_metric, volume_data, WarpSpec, WarpedMetric};
use fracyam::scattering::{scattering_multiplier, SolveOptions};
use fracyam::specfun::sphere_multiplier;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn multiplier_matches_gamma_ratio(n in 2usize..7, gamma in 0.06f64..0.94, k in 0usize..6) {
        let r = scattering_multiplier(n, gamma, k).unwrap();
        let want = sphere_multiplier(n, gamma, k).unwrap();
        prop_assert!((r.value - want).abs() <= 1e-6 * want.abs(), "{} vs {}", r.value, want);
    }

    #[test]
    fn weighted_j_cross_formula(n in 2usize..6, gamma in 0.06f64..0.94) {
        let c = build_compactification(CompactKind::TypeI { gamma }, &WarpedMetric::hyperbolic(n), SolveOptions::default()).unwrap();
        let j = weighted_j(&c, &linspace(0.5, 20.0, 40)).unwrap();
        prop_assert!(j.cross_checked && j.max_discrepancy <= 1e-7);
    }

    #[test]
    fn type_two_nonpositive_on_deficit(delta in 0.0f64..0.6, gamma in 0.1f64..0.9) {
        let m = make_warped_metric(3, WarpSpec::Deficit { delta }).unwrap();
        let c = build_compactification(CompactKind::TypeII { gamma }, &m, SolveOptions::default()).unwrap();
        let j = weighted_j(&c, &linspace(0.5, 20.0, 40)).unwrap();
        prop_assert!(j.lemma.iter().all(|v| *v <= 1e-8));
    }

    #[test]
    fn model_conformal_factor_is_one(n in 2usize..6, gamma in 0.06f64..0.94) {
        let m = WarpedMetric::hyperbolic(n);
        let a = build_compactification(CompactKind::TypeI { gamma }, &m, SolveOptions::default()).unwrap();
        let b = build_compactification(CompactKind::TypeII { gamma }, &m, SolveOptions::default()).unwrap();
        let f = conformal_factor(&a, &b, &linspace(0.1, 20.0, 40)).unwrap();
        prop_assert!(f.iter().all(|v| (v - 1.0).abs() <= 1e-9));
    }

    #[test]
    fn energy_invariance_random_bump(amp in -0.5f64..0.5, width in 0.5f64..3.0, gamma in 0.1f64..0.9) {
        let c = build_compactification(CompactKind::TypeI { gamma }, &WarpedMetric::hyperbolic(3), SolveOptions::default()).unwrap();
        let psi = Bump { amplitude: amp, width };
        let e1 = energy(&c, |t| { let v = psi.eval(t); [v[0], v[1]] }, 10.0).unwrap();
        let e2 = energy(&c.rescaled(psi).unwrap(), |_| [1.0, 0.0], 10.0).unwrap();
        prop_assert!((e1.value - e2.value).abs() <= 1e-8 * e1.value.abs().max(1.0));
    }

    #[test]
    fn bishop_gromov_under_ricci_gate(delta in 0.0f64..0.6, n in 2usize..6) {
        let m = make_warped_metric(n, WarpSpec::Deficit { delta }).unwrap();
        let v = volume_data(&m, &linspace(0.1, 20.0, 60)).unwrap();
        prop_assert!(v.monotone);
        prop_assert!(v.area_ratio.iter().zip(&v.ball_ratio).all(|(a, b)| *a <= b + 1e-10 && *b <= 1.0 + 1e-10));
    }
}
