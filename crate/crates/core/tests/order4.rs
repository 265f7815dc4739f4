//! Order-4 identities: sides vanish separately on parallel-Ricci models, and
//! perturbing any printed coefficient breaks them.

mod common;

use common::{builtins, calibrated, point_data};
use qem_core::models::{doubly_warped, hemisphere};
use qem_core::verify::checks::{coefficient_controls, shifted_potential_control, wrong_lambda_control};
use qem_core::verify::identities as id;

#[test]
fn each_side_vanishes_on_parallel_ricci_models() {
    for inst in builtins() {
        let (pds, c) = point_data(&inst, 20, 4);
        for p in &pds {
            for i in [id::laplacian_ricci(p, &c), id::ricci_cube_trace(p, &c), id::p_cube_trace(p, &c)] {
                let i = i.unwrap();
                assert!(i.lhs_magnitude() < 1e-7 && i.rhs_magnitude() < 1e-7, "{}: {:e} {:e}", inst.label, i.lhs_magnitude(), i.rhs_magnitude());
            }
        }
    }
}

#[test]
fn four_dimensional_identities_on_rigid_product() {
    let m = 2.0;
    let inst = calibrated(doubly_warped(1, 2, m).unwrap(), 10);
    let (pds, c) = point_data(&inst, 20, 4);
    let rho = c.rho;
    // λ = (m+1)ρ on this model
    assert!((c.lambda - (m + 1.0) * rho).abs() < 1e-10);
    for p in &pds {
        for i in [id::p_cube_drift_laplacian(p, &c), id::p_cube_weighted(p, &c)] {
            let i = i.unwrap();
            assert!(i.residual() < 1e-8 && i.lhs_magnitude() < 1e-7 && i.rhs_magnitude() < 1e-7);
        }
        assert!(id::p_cube_weighted_bound(p, &c).unwrap().shortfall() < 1e-8);
        // both sides equal −(m+1)ρ·2m²ρ²·u
        let eq = id::p_curvature_contraction(p, &c).unwrap();
        let expected = -(m + 1.0) * rho * 2.0 * m * m * rho * rho * p.u;
        assert!((eq.lhs_value().at(&[]) - expected).abs() < 1e-8);
        assert!((eq.rhs_value().at(&[]) - expected).abs() < 1e-8);
        let h = id::h_weighted_bound(p, &c).unwrap();
        assert!(h.lhs_magnitude() < 1e-7 && h.rhs_magnitude() < 1e-7);
        assert!(id::h_value(p, &c).unwrap() >= -1e-10);
        assert!(id::p_trace(p, &c).unwrap().residual() < 1e-8);
        assert!(id::p_norm(p, &c).unwrap().residual() < 1e-8);
    }
}

#[test]
fn four_dimensional_identities_reject_other_models() {
    let inst = calibrated(hemisphere(4, 2.0).unwrap(), 10);
    let (pds, c) = point_data(&inst, 2, 4);
    assert!(id::p_cube_weighted(&pds[0], &c).is_err());
    let inst = calibrated(hemisphere(3, 2.0).unwrap(), 10);
    let (pds, c) = point_data(&inst, 2, 4);
    assert!(id::p_trace(&pds[0], &c).is_err());
}

#[test]
fn coefficient_perturbations_are_detected() {
    let inst = calibrated(doubly_warped(1, 2, 2.0).unwrap(), 10);
    let controls = coefficient_controls(&inst, 10).unwrap();
    assert!(controls.len() >= 6);
    for c in &controls {
        assert!(c.baseline < 1e-7, "{c:?}");
        assert!(c.perturbed > 1e-3, "{c:?}");
    }
}

#[test]
fn wrong_lambda_and_shifted_potential_fail() {
    let inst = calibrated(hemisphere(3, 2.0).unwrap(), 10);
    let c = wrong_lambda_control(&inst, 0.1, 20).unwrap();
    assert!(c.baseline < 1e-8 && c.perturbed > 1e-3, "{c:?}");
    let c = shifted_potential_control(&inst, 0.01, 20).unwrap();
    assert!(c.baseline < 1e-8 && c.perturbed > 1e-4, "{c:?}");
}
