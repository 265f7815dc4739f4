mod common;

use common::{builtins, calibrated, point_data};
use qem_core::linalg::symmetric_eigenvalues;
use qem_core::models::{build_model, cylinder, doubly_warped, hemisphere, product_excg, Model, MODEL_CATALOG};
use qem_core::verify::checks::{boundary_scalar_residual, Collector, Suite};
use qem_core::verify::identities as id;
use std::collections::BTreeMap;

#[test]
fn defining_equation_holds_on_builtins() {
    for inst in builtins() {
        let (pds, c) = point_data(&inst, 30, 2);
        for p in &pds {
            let r = id::defining_equation(p, &c).unwrap().residual();
            assert!(r < 1e-8, "{}: {r:e}", inst.label);
        }
    }
}

#[test]
fn scalar_curvature_matches_closed_forms() {
    for (n, m) in [(3, 2.0), (4, 3.0), (5, 2.5)] {
        let inst = hemisphere::<f64>(n, m).unwrap();
        let lambda = m + n as f64 - 1.0;
        assert_eq!(inst.lambda, lambda);
        let nn = n as f64;
        assert!((inst.expected_r - nn * (nn - 1.0) * lambda / (m + nn - 1.0)).abs() < 1e-12);
        assert_eq!(inst.expected_k, 0);
    }
    let c = cylinder::<f64>(4, 2.0, 1.5).unwrap();
    assert!((c.expected_r - 3.0 * 1.5).abs() < 1e-12);
    assert_eq!(c.expected_k, 3);
    let d = doubly_warped::<f64>(1, 2, 3.0).unwrap();
    assert!((d.expected_r - 2.0 * 5.0).abs() < 1e-12);
    assert_eq!(d.expected_k, 2);
    let p = product_excg::<f64>(2, 2, 2.0, 1.0).unwrap();
    assert!((p.expected_r - 4.0).abs() < 1e-12);

    for inst in builtins() {
        let (pds, _) = point_data(&inst, 30, 2);
        for p in &pds {
            let rel = (p.scal - inst.expected_r).abs() / inst.expected_r.abs().max(1.0);
            assert!(rel < 1e-8, "{}: R = {}", inst.label, p.scal);
        }
    }
}

#[test]
fn rigid_product_has_two_ricci_eigenvalues() {
    let m = 2.0;
    let inst = calibrated(doubly_warped(1, 2, m).unwrap(), 10);
    let lambda = m + 1.0;
    let (pds, _) = point_data(&inst, 50, 2);
    let expected = [lambda / (m + 1.0), lambda / (m + 1.0), lambda, lambda];
    for p in &pds {
        let e = symmetric_eigenvalues(&p.ric);
        for (a, b) in e.iter().zip(expected) {
            assert!((a - b).abs() < 1e-8, "{e:?}");
        }
    }
}

#[test]
fn cylinder_ricci_is_zero_then_lambda() {
    let inst = calibrated(cylinder(4, 2.0, 1.5).unwrap(), 10);
    let (pds, _) = point_data(&inst, 20, 2);
    for p in &pds {
        let e = symmetric_eigenvalues(&p.ric);
        assert!(e[0].abs() < 1e-8);
        assert!(e[1..].iter().all(|v| (v - 1.5).abs() < 1e-8), "{e:?}");
    }
}

#[test]
fn boundary_is_where_u_vanishes() {
    for inst in builtins() {
        assert!(!inst.boundary_faces.is_empty(), "{}", inst.label);
        let (r, notes) = boundary_scalar_residual(&inst).unwrap();
        assert!(r < 1e-8, "{}: {notes}", inst.label);
    }
}

#[test]
fn mu_matches_closed_form_on_hemisphere() {
    // u = cos r, |∇u|² = 1 − u²; the u² terms cancel and μ = m − 1
    let inst = calibrated(hemisphere(3, 2.0).unwrap(), 10);
    assert!((inst.mu.unwrap() - 1.0).abs() < 1e-10, "{:?}", inst.mu);
}

#[test]
fn catalog_has_exactly_the_six_models() {
    let names: Vec<_> = MODEL_CATALOG.iter().map(|e| e.name).collect();
    assert_eq!(names, ["cone", "cylinder", "doubly-warped", "hemisphere", "hyperbolic-warped", "product-excg"]);
    for e in MODEL_CATALOG {
        build_model(e.name, &BTreeMap::new()).unwrap();
    }
}

#[test]
fn model_parameter_errors() {
    let mut p = BTreeMap::new();
    p.insert("m".to_string(), 1.0);
    let e = build_model("hemisphere", &p).unwrap_err();
    assert!(e.to_string().contains("m must exceed 1"));
    p.clear();
    p.insert("alpha".to_string(), 1.0);
    assert!(build_model("hemisphere", &p).is_err());
    assert!(build_model("torus", &BTreeMap::new()).is_err());
    p.clear();
    p.insert("n".to_string(), 2.5);
    assert!(build_model("cylinder", &p).is_err());
}

#[test]
fn warped_models_only_run_classification() {
    let model = build_model("cone", &BTreeMap::new()).unwrap();
    let Model::Warped { spec, params } = model else { panic!("cone is warped") };
    let mut col = Collector::new(BTreeMap::new());
    qem_core::verify::checks::run_classification_warped(&mut col, &spec, &params, 20).unwrap();
    let (results, _) = col.finish();
    assert!(results.iter().all(|r| r.passed && r.name.starts_with(Suite::Classification.name())));
}
