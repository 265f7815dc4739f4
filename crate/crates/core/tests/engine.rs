//! Curvature engine against independent oracles.

use proptest::prelude::*;
use qem_core::curvature::{bianchi_selftests, calibrate_sign_convention, symmetry_residuals, CurvatureBundle};
use qem_core::field::ChartPoint;
use qem_core::finite_diff::{central_partial, default_step, fd_curvature};
use qem_core::models::charts::round_sphere;
use qem_core::models::random::{random_metric, random_warped_metric};
use qem_core::tensor::{kulkarni_nomizu, Element};
use qem_core::verify::algebraic::random_symmetric;
use qem_core::{Jet, Jet32, Tensor};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn test_fn(a: f64, b: f64, c: f64) -> impl Fn(&[f64]) -> f64 {
    move |x| (a * x[0] + b * x[1]).sin() * (c * x[1]).exp()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jet_partials_match_finite_differences(
        a in -1.5..1.5f64, b in -1.5..1.5f64, c in -1.0..1.0f64,
        x0 in -1.0..1.0f64, x1 in -1.0..1.0f64,
    ) {
        let vars = Jet::variables(&[x0, x1], 4).unwrap();
        let arg = &vars[0].scaled(a) + &vars[1].scaled(b);
        let jet = &arg.sin() * &vars[1].scaled(c).exp();
        let f = test_fn(a, b, c);
        for idx in [vec![0], vec![1], vec![0, 1], vec![1, 1], vec![0, 0, 1], vec![0, 1, 1, 1]] {
            let fd = central_partial(&f, &[x0, x1], &idx, default_step(idx.len()));
            let tol = if idx.len() <= 2 { 1e-6 } else { 2e-3 };
            prop_assert!((jet.partial(&idx).unwrap() - fd).abs() < tol, "{:?}", idx);
        }
    }

    #[test]
    fn kulkarni_nomizu_symmetries(seed in 0u64..1000, n in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_symmetric(&mut rng, n);
        let t = random_symmetric(&mut rng, n);
        let kn = kulkarni_nomizu(&s, &t);
        prop_assert!(kn.max_abs_diff(&kulkarni_nomizu(&t, &s)) < 1e-12);
        let mut worst = 0.0f64;
        qem_core::tensor::for_each_index(n, 4, |i| {
            let v = kn.at(i);
            worst = worst.max((v + kn.at(&[i[1], i[0], i[2], i[3]])).abs());
            worst = worst.max((v - kn.at(&[i[2], i[3], i[0], i[1]])).abs());
            worst = worst.max((v + kn.at(&[i[1], i[2], i[0], i[3]]) + kn.at(&[i[2], i[0], i[1], i[3]])).abs());
        });
        prop_assert!(worst < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_metrics_satisfy_universal_identities(seed in 0u64..10_000, n in 3usize..5, s in prop::array::uniform3(0.05..0.95f64)) {
        let g = random_metric(seed, n).unwrap();
        let x = g.domain.from_unit(&s[..n.min(3)].iter().copied().chain([0.5]).take(n).collect::<Vec<_>>());
        let b = CurvatureBundle::compute(&g, &x, 4).unwrap();
        let st = bianchi_selftests(&b).unwrap();
        prop_assert!(st.contracted_twice < 1e-8 && st.contracted_once < 1e-8);
        prop_assert!(st.ricci_commutation.unwrap() < 1e-8);
        prop_assert!(st.cotton_skew < 1e-8 && st.cotton_trace < 1e-8);
        if let Some(r) = st.cotton_weyl { prop_assert!(r < 1e-8); }
        let sym = symmetry_residuals(&b).unwrap();
        prop_assert!(sym.riem_antisym < 1e-10 && sym.riem_pair < 1e-10 && sym.riem_first_bianchi < 1e-10);
        let fd = fd_curvature(&g, &x.coords, 1e-4).unwrap();
        prop_assert!(fd.ric.max_abs_diff(&b.ric) < 1e-6);
        prop_assert!(fd.gamma.max_abs_diff(&b.gamma) < 1e-8);
    }
}

#[test]
fn random_warped_metrics_pass_engine_identities() {
    for seed in 1..=5 {
        let g = random_warped_metric(seed, 4).unwrap();
        for x in g.domain.halton_points(20) {
            let b = CurvatureBundle::compute(&g, &x, 4).unwrap();
            let st = bianchi_selftests(&b).unwrap();
            let worst = [st.contracted_twice, st.contracted_once, st.ricci_commutation.unwrap(), st.cotton_skew, st.cotton_trace, st.cotton_weyl.unwrap()]
                .into_iter()
                .fold(0.0, f64::max);
            assert!(worst < 1e-6, "seed {seed}: {st:?}");
        }
    }
}

#[test]
fn round_spheres_have_constant_curvature() {
    for n in 2..=6 {
        for r in [1.0, 0.5, 2.0] {
            let s = round_sphere::<f64>(n, r).unwrap();
            let b = CurvatureBundle::compute(&s, &s.domain.from_unit(&vec![0.37; n]), 2).unwrap();
            let nn = n as f64;
            assert!((b.scal - nn * (nn - 1.0) / (r * r)).abs() < 1e-10, "n={n} r={r}: {}", b.scal);
            // R_ijkl = (g_ik g_jl − g_il g_jk)/r²
            let gg = kulkarni_nomizu(&b.g, &b.g).scale(0.5 / (r * r));
            assert!(b.riem.max_abs_diff(&gg) < 1e-10);
        }
    }
}

#[test]
fn sign_convention_is_calibrated() {
    for n in 2..=6 {
        let c = calibrate_sign_convention(n).unwrap();
        assert!(c.passed && (c.min_sectional - 1.0).abs() < 1e-12 && c.ricci_residual < 1e-12);
        assert_eq!(c.digest, calibrate_sign_convention(n).unwrap().digest);
    }
}

#[test]
fn single_precision_pipeline() {
    let s = round_sphere::<f32>(3, 1.0).unwrap();
    let b = CurvatureBundle::compute(&s, &s.domain.midpoint(), 2).unwrap();
    assert!((b.scal - 6.0).abs() < 1e-3);
    let v: Vec<Jet32> = Jet::variables(&[0.5f32], 2).unwrap();
    assert!((v[0].sin().partial(&[0, 0]).unwrap() + 0.5f32.sin()).abs() < 1e-6);
}

#[test]
fn errors_for_bad_points_and_orders() {
    let s = round_sphere::<f64>(3, 1.0).unwrap();
    let outside = ChartPoint::new(vec![0.0, 1.0, 1.0]);
    assert!(CurvatureBundle::compute(&s, &outside, 2).is_err());
    assert!(CurvatureBundle::compute(&s, &s.domain.midpoint(), 5).is_err());
    let b = CurvatureBundle::compute(&s, &s.domain.midpoint(), 2).unwrap();
    assert!(b.cov_ric.is_none());
    let _: Tensor<f64> = b.ric;
}
