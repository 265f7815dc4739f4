//! Eigenvalue-tuple and raw-matrix identities against brute force.

use proptest::prelude::*;
use qem_core::verify::algebraic::*;
use qem_core::verify::{admissible_scalar_set, classify_scalar, QeConstants};
use qem_core::Tensor;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `min_{i≠j} a_i a_j` by enumerating pairs.
fn min_pair(a: &[f64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..a.len() {
        for j in 0..a.len() {
            if i != j {
                best = best.min(a[i] * a[j]);
            }
        }
    }
    best
}

fn sorted_desc(mut a: Vec<f64>) -> Vec<f64> {
    a.sort_by(|x, y| y.total_cmp(x));
    a
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn lemsum_bound_against_pair_enumeration(a in prop::collection::vec(-5.0..5.0f64, 2..8)) {
        let a = sorted_desc(a);
        let n = a.len() as f64;
        let s: f64 = a.iter().sum();
        let q: f64 = a.iter().map(|x| x * x).sum();
        let b = s * s - (n - 1.0) * q;
        let o = lemsum_check(&a).unwrap();
        prop_assert!((o.b - b).abs() < 1e-9 * (1.0 + b.abs()));
        prop_assert!((o.min_pair_product - min_pair(&a)).abs() < 1e-12);
        prop_assert!(min_pair(&a) >= b / (2.0 * (n - 1.0)) - 1e-9);
        if b >= 0.0 {
            prop_assert!(a.iter().all(|&x| x >= 0.0) || a.iter().all(|&x| x <= 0.0));
        }
    }

    #[test]
    fn cubic_expansion_on_random_triples(a in -3.0..3.0f64, b in -3.0..3.0f64, c in -3.0..3.0f64) {
        let lhs = (a + b + c).powi(3);
        let rhs = 3.0 * (a + b + c) * (a * a + b * b + c * c) - 2.0 * (a.powi(3) + b.powi(3) + c.powi(3)) + 6.0 * a * b * c;
        prop_assert!((lhs - rhs).abs() < 1e-11);
        prop_assert!(cubic_expansion_residual(a, b, c).abs() < 1e-11);
    }

    #[test]
    fn constrained_family_satisfies_sum_identities(m in 1.1..10.0f64, rho in 0.05..3.0f64, theta in 0.0..std::f64::consts::TAU) {
        let mu = constrained_triple(m, rho, theta);
        // Σμ = 2mρ, Σμ² = 2m²ρ²
        prop_assert!((mu.iter().sum::<f64>() - 2.0 * m * rho).abs() < 1e-10 * m * rho);
        let q: f64 = mu.iter().map(|x| x * x).sum();
        prop_assert!((q - 2.0 * m * m * rho * rho).abs() < 1e-9 * (m * rho).powi(2));
        let r = symmetric_sum_identities(mu, m, rho, 1e-8).unwrap();
        let scale = (m * rho).powi(4).max(1.0);
        prop_assert!(r.product.abs() < 1e-10 * scale && r.quartic.abs() < 1e-10 * scale && r.cubic.abs() < 1e-10 * scale);
    }

    #[test]
    fn classification_round_trip(n in 2usize..7, m in prop::sample::select(vec![1.5, 2.0, 3.0, 10.0]), lambda in 0.1..5.0f64) {
        let set = admissible_scalar_set(n, m, lambda).unwrap();
        prop_assert_eq!(set.len(), n);
        for a in &set {
            prop_assert_eq!(classify_scalar(a.r, n, m, lambda, 1e-10).unwrap(), Some(a.k));
            prop_assert!(a.r < n as f64 * lambda);
            prop_assert_eq!(a.excluded, a.k == 1);
        }
    }

    #[test]
    fn trace_conversions(seed in 0u64..100_000, n in 2usize..7, rho in -2.0..2.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ric = random_symmetric(&mut rng, n);
        let p = ric.sub(&Tensor::identity(n).scale(rho));
        let r3 = trace_power_brute(&ric, 3);
        prop_assert!((r3 - ricci_cube_via_p(&p, rho)).abs() < 1e-10 * (1.0 + r3.abs()));
        let r4 = trace_power_brute(&ric, 4);
        prop_assert!((r4 - ricci_fourth_via_p(&p, rho)).abs() < 1e-10 * (1.0 + r4.abs()));
        let rm = random_curvature_tensor(&mut rng, n);
        let rc = ricci_contraction(&rm);
        let pr = rc.sub(&Tensor::identity(n).scale(rho));
        let d = curvature_quartic_direct(&rm, &rc);
        prop_assert!((d - curvature_quartic_via_p(&rm, &pr, rho, rc.trace())).abs() < 1e-9 * (1.0 + d.abs()));
        prop_assert!(kn_contraction_residual(&ric) < 1e-12);
    }

    #[test]
    fn t_norm_identity_on_synthetic_constant_scalar_data(seed in 0u64..100_000, n in 3usize..7, m in 1.2..6.0f64, lambda in 0.2..3.0f64, scal in -3.0..6.0f64, u in 0.1..1.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = QeConstants { n, m, lambda, rho: 0.0, mu: 0.0 };
        let du = Tensor::from_fn(n, 1, |_| rng.gen_range(-1.0..1.0));
        let a = random_symmetric(&mut rng, n);
        let e = constrained_traceless(&c, scal, &du, &a);
        prop_assert!(e.trace().abs() < 1e-12);
        let (r1, r2) = t_norm_synthetic(&c, scal, u, &e, &du).unwrap();
        prop_assert!(r1.abs() < 1e-9 && r2.abs() < 1e-9, "{} {}", r1, r2);
    }
}

#[test]
fn printed_four_dimensional_scalar_set() {
    for m in [1.5f64, 2.0, 3.0, 10.0] {
        let l: f64 = 1.7;
        let set = admissible_scalar_set(4, m, l).unwrap();
        let printed = [12.0 * l / (m + 3.0), (m + 8.0) * l / (m + 2.0), 2.0 * (m + 2.0) * l / (m + 1.0), 3.0 * l];
        for (a, p) in set.iter().zip(printed) {
            assert!((a.r - p).abs() < 1e-12, "k={} {} vs {p}", a.k, a.r);
        }
    }
}

#[test]
fn rigid_pattern_in_family() {
    let (m, rho) = (2.0, 0.7);
    let mu = constrained_triple(m, rho, std::f64::consts::FRAC_PI_3);
    let mut s = mu.to_vec();
    s.sort_by(|a, b| a.total_cmp(b));
    assert!(s[0].abs() < 1e-12 && (s[1] - m * rho).abs() < 1e-12 && (s[2] - m * rho).abs() < 1e-12);
}

#[test]
fn classification_rejects_bad_input() {
    assert!(admissible_scalar_set(4, 1.0, 1.0).is_err());
    assert!(admissible_scalar_set(1, 2.0, 1.0).is_err());
    assert_eq!(classify_scalar(100.0, 4, 2.0, 1.0, 1e-10).unwrap(), None);
    assert!(lemsum_check(&[1.0, 2.0]).is_err());
}
