//! First-order and tensor identities on the built-in models.

mod common;

use common::{builtins, calibrated, point_data};
use qem_core::models::{cylinder, doubly_warped};
use qem_core::verify::checks::{t_spectrum_sides, two_eigenvalue_defect};
use qem_core::verify::identities as id;
use qem_core::verify::{Identity, PointData, QeConstants};
use qem_core::Result;

type Builder = fn(&PointData<f64>, &QeConstants<f64>) -> Result<Identity<f64>>;

const VANISHING: &[(&str, Builder)] = &[
    ("trace", id::trace_equation),
    ("scalar_gradient", id::scalar_gradient),
    ("integrability", id::integrability),
    ("scalar_laplacian", id::scalar_laplacian),
    ("ricci_curl", id::ricci_curl),
    ("traceless_ricci_norm", id::traceless_ricci_norm),
    ("transnormal", id::transnormal),
    ("ricci_on_gradient", id::ricci_on_gradient),
    ("p_annihilates_gradient", id::p_annihilates_gradient),
    ("cotton_weyl_decomposition", id::cotton_weyl_decomposition),
    ("t_forms_agree", id::t_forms_agree),
    ("t_norm_contraction", id::t_norm_contraction),
    ("t_norm_square", id::t_norm_square_identity),
    ("p_curl_general", id::p_curl_general),
    ("p_curl", id::p_curl),
    ("p_gradient_gradient", id::p_gradient_gradient),
    ("p_gradient_contraction", id::p_gradient_contraction),
];

#[test]
fn identities_hold_on_builtins() {
    for inst in builtins() {
        let (pds, c) = point_data(&inst, 20, 4);
        for (name, build) in VANISHING {
            for p in &pds {
                match build(p, &c) {
                    Ok(i) => {
                        let tol = if *name == "scalar_laplacian" { 1e-6 } else { 1e-8 };
                        assert!(i.residual() < tol, "{} {name}: {:e}", inst.label, i.residual());
                    }
                    Err(e) => assert!(c.n < 3, "{} {name}: {e}", inst.label),
                }
            }
        }
    }
}

#[test]
fn auxiliary_tensor_vanishes_with_two_eigenvalues() {
    for inst in [cylinder(3, 2.0, 1.0).unwrap(), cylinder(4, 3.0, 2.0).unwrap()] {
        let inst = calibrated(inst, 10);
        let (pds, c) = point_data(&inst, 20, 3);
        for p in &pds {
            assert!(two_eigenvalue_defect(p) < 1e-8);
            assert!(id::t_tensor_ricci(p, &c).unwrap().max_abs() < 1e-8);
            assert!(id::t_vanishes(p, &c).unwrap().residual() < 1e-8);
        }
    }
}

/// On the rigid product Ric has eigenvalues λ/(m+1) on ∇u and {λ/(m+1), λ, λ}
/// on its complement, so T does not vanish. With m = 2, n = 4, R = 8 the
/// traceless Ricci has ξ₁ = −1 and {−1, 1, 1} on ∇u^⊥, which gives
/// |T|²/4 = 2·(3 − 1/3)|∇u|², i.e. |T|² = (64/3)|∇u|².
#[test]
fn auxiliary_tensor_on_rigid_product_matches_spectrum() {
    let inst = calibrated(doubly_warped(1, 2, 2.0).unwrap(), 10);
    let (pds, c) = point_data(&inst, 20, 3);
    for p in &pds {
        let t = id::t_tensor_ricci(p, &c).unwrap();
        let predicted = 64.0 / 3.0 * p.grad_u2;
        assert!((t.norm_sq() - predicted).abs() < 1e-8 * predicted.max(1.0), "{} vs {predicted}", t.norm_sq());
        let (lhs, rhs) = t_spectrum_sides(p, &c).unwrap();
        assert!((lhs - rhs).abs() < 1e-8);
        assert!(two_eigenvalue_defect(p) > 1.0);
        // |∇u|² = 1 − u² on this model
        assert!((p.grad_u2 - (1.0 - p.u * p.u)).abs() < 1e-10);
    }
}

#[test]
fn transnormal_profile_on_cylinder() {
    // u = sin(√(λ/m) t): |∇u|² = (λ/m)(1 − u²)
    let inst = calibrated(cylinder(3, 2.0, 1.0).unwrap(), 10);
    let (pds, _) = point_data(&inst, 30, 2);
    for p in &pds {
        assert!((p.grad_u2 - 0.5 * (1.0 - p.u * p.u)).abs() < 1e-10);
    }
}
