//! One line per acceptance criterion. Tolerances are the published ones.
//!
//! Criterion 5 contains one sub-claim that does not hold on the rigid product
//! model (T ≡ 0); that line prints FAIL and the test instead pins the measured
//! value to its closed-form prediction.

mod common;

use std::collections::BTreeMap;

use common::{builtins, calibrated, point_data};
use qem_core::curvature::{bianchi_selftests, CurvatureBundle};
use qem_core::finite_diff::fd_curvature;
use qem_core::linalg::symmetric_eigenvalues;
use qem_core::models::random::random_warped_metric;
use qem_core::models::{build_model, cylinder, doubly_warped, hemisphere, Model};
use qem_core::verify::checks::{self, Collector, DUAL_PATH_STEP};
use qem_core::verify::identities as id;
use qem_core::verify::{admissible_scalar_set, classify_scalar, Identity, PointData, QeConstants};
use qem_core::Result;

struct Line {
    criterion: &'static str,
    passed: bool,
    detail: String,
}

fn line(criterion: &'static str, passed: bool, detail: impl Into<String>) -> Line {
    Line { criterion, passed, detail: detail.into() }
}

fn max(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

fn criterion_1() -> Line {
    let worst = max(builtins().iter().map(|inst| {
        let (pds, c) = point_data(inst, 50, 2);
        max(pds.iter().map(|p| id::defining_equation(p, &c).unwrap().residual()))
    }));
    line("1 defining system", worst < 1e-8, format!("max |∇²u − (u/m)(Ric−λg)| = {worst:.2e} < 1e-8 on 8 built-ins"))
}

fn criterion_2() -> Line {
    let mut ok = true;
    let mut worst = 0.0f64;
    for inst in builtins() {
        let nn = inst.dim() as f64;
        let (closed, k) = match inst.name.as_str() {
            "hemisphere" => (nn * (nn - 1.0) * inst.lambda / (inst.m + nn - 1.0), 0),
            "cylinder" | "product-excg" => ((nn - 1.0) * inst.lambda, inst.dim() - 1),
            "doubly-warped" => (2.0 * (inst.m + 2.0) * inst.lambda / (inst.m + 1.0), 2),
            other => panic!("unexpected model {other}"),
        };
        let (pds, _) = point_data(&inst, 50, 2);
        let rel = max(pds.iter().map(|p| (p.scal - closed).abs() / closed.abs()));
        worst = worst.max(rel);
        let kk = classify_scalar(closed, inst.dim(), inst.m, inst.lambda, 1e-10).unwrap();
        ok &= rel < 1e-8 && kk == Some(k) && inst.expected_k == k;
    }
    let d = doubly_warped::<f64>(1, 2, 2.0).unwrap();
    ok &= (d.expected_r - 2.0 * (2.0 + 2.0)).abs() < 1e-12;
    line("2 scalar curvature values", ok, format!("max relative deviation {worst:.2e} < 1e-8; k classified as 0, n−1, n−1, 2"))
}

fn criterion_3() -> Line {
    let mut ok = true;
    let mut worst = 0.0f64;
    for m in [1.5f64, 2.0, 3.0, 10.0] {
        let l = 1.0;
        let printed = [12.0 * l / (m + 3.0), (m + 8.0) * l / (m + 2.0), 2.0 * (m + 2.0) * l / (m + 1.0), 3.0 * l];
        for (a, p) in admissible_scalar_set(4, m, l).unwrap().iter().zip(printed) {
            worst = worst.max((a.r - p).abs());
        }
        for n in 2..=6 {
            for a in admissible_scalar_set(n, m, l).unwrap() {
                ok &= classify_scalar(a.r, n, m, l, 1e-10).unwrap() == Some(a.k);
                ok &= a.r < n as f64 * l;
            }
        }
    }
    ok &= worst < 1e-12;
    line("3 admissible scalar set", ok, format!("n=4 printed set reproduced (max dev {worst:.1e}); classify∘enumerate = id for n ≤ 6; all R_k < nλ"))
}

fn criterion_4() -> Line {
    let m = 2.0;
    let inst = calibrated(doubly_warped(1, 2, m).unwrap(), 10);
    let lambda = inst.lambda;
    let (pds, _) = point_data(&inst, 50, 2);
    let eigs: Vec<Vec<f64>> = pds.iter().map(|p| symmetric_eigenvalues(&p.ric)).collect();
    let expected = [lambda / (m + 1.0), lambda / (m + 1.0), lambda, lambda];
    let dev = max(eigs.iter().flat_map(|e| e.iter().zip(expected).map(|(a, b)| (a - b).abs()).collect::<Vec<_>>()));
    let spread = max((0..4).map(|k| {
        let v: Vec<f64> = eigs.iter().map(|e| e[k]).collect();
        v.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - v.iter().cloned().fold(f64::INFINITY, f64::min)
    }));
    let cyl = calibrated(cylinder(4, 2.0, 1.0).unwrap(), 10);
    let (cp, _) = point_data(&cyl, 20, 2);
    let cdev = max(cp.iter().flat_map(|p| {
        let e = symmetric_eigenvalues(&p.ric);
        e.iter().zip([0.0, 1.0, 1.0, 1.0]).map(|(a, b)| (a - b).abs()).collect::<Vec<_>>()
    }));
    let ok = (lambda - (m + 1.0)).abs() < 1e-12 && dev < 1e-8 && spread < 1e-8 && cdev < 1e-8;
    line("4 Ricci eigenstructure", ok, format!("S²₊×S²: {{1,1,3,3}} dev {dev:.1e}, spread {spread:.1e} over 50 points; cylinder {{0,λ,λ,λ}} dev {cdev:.1e}"))
}

type Builder = fn(&PointData<f64>, &QeConstants<f64>) -> Result<Identity<f64>>;

fn criterion_5() -> (Line, Line) {
    let list: &[Builder] = &[
        id::scalar_gradient,
        id::integrability,
        id::ricci_curl,
        id::traceless_ricci_norm,
        id::p_annihilates_gradient,
        id::cotton_weyl_decomposition,
        id::p_curl_general,
        id::p_curl,
        id::p_gradient_gradient,
        id::p_gradient_contraction,
        id::transnormal,
        id::ricci_on_gradient,
        id::t_forms_agree,
    ];
    let mut worst = 0.0f64;
    let mut t_max = 0.0f64;
    let mut t_where = String::new();
    let mut prediction_ok = true;
    for inst in builtins() {
        let (pds, c) = point_data(&inst, 30, 3);
        for p in &pds {
            for b in list {
                worst = worst.max(b(p, &c).unwrap().residual());
            }
            let t = id::t_tensor_ricci(p, &c).unwrap().max_abs();
            if t > t_max {
                t_max = t;
                t_where = inst.label.clone();
            }
            if inst.name == "doubly-warped" {
                let tn = id::t_tensor_ricci(p, &c).unwrap().norm_sq();
                prediction_ok &= (tn - 64.0 / 3.0 * p.grad_u2).abs() < 1e-8 * tn.max(1.0);
            } else {
                prediction_ok &= t < 1e-8;
            }
        }
    }
    (
        line("5 identity suite", worst < 1e-8, format!("{} identities, max residual {worst:.2e} < 1e-8 on 8 built-ins", list.len())),
        line(
            "5 T ≡ 0 on all built-ins",
            t_max < 1e-8 && prediction_ok,
            format!(
                "max |T_ijk| = {t_max:.3e} on {t_where}: Ric has eigenvalues {{1,3,3}} on ∇u^⊥, so T ≠ 0; measured |T|² = (64/3)|∇u|² as predicted: {}",
                if prediction_ok { "yes" } else { "no" }
            ),
        ),
    )
}

fn criterion_6() -> (Line, Vec<checks::ControlOutcome>) {
    let mut worst = 0.0f64;
    for inst in builtins() {
        let (pds, c) = point_data(&inst, 20, 4);
        let mut ids: Vec<Builder> = vec![id::laplacian_ricci, id::ricci_cube_trace, id::p_cube_trace];
        if inst.name == "doubly-warped" {
            ids.extend([id::p_cube_drift_laplacian as Builder, id::p_cube_weighted, id::h_weighted_bound]);
        }
        for p in &pds {
            for b in &ids {
                let i = b(p, &c).unwrap();
                worst = worst.max(i.lhs_magnitude()).max(i.rhs_magnitude());
            }
        }
    }
    let inst = calibrated(doubly_warped(1, 2, 2.0).unwrap(), 10);
    let controls = checks::coefficient_controls(&inst, 20).unwrap();
    let min_perturbed = controls.iter().map(|c| c.perturbed).fold(f64::INFINITY, f64::min);
    let ok = worst < 1e-6 && controls.len() >= 6 && min_perturbed > 1e-3;
    (
        line(
            "6 order-4 suite",
            ok,
            format!("max side magnitude {worst:.2e} < 1e-6; {} coefficient controls, smallest perturbed residual {min_perturbed:.2e} > 1e-3", controls.len()),
        ),
        controls,
    )
}

fn criterion_7() -> Line {
    let (mut univ, mut dual) = (0.0f64, 0.0f64);
    for seed in 1..=5 {
        let g = random_warped_metric(seed, 4).unwrap();
        for x in g.domain.halton_points(20) {
            let b = CurvatureBundle::compute(&g, &x, 4).unwrap();
            let s = bianchi_selftests(&b).unwrap();
            univ = max([univ, s.contracted_twice, s.contracted_once, s.ricci_commutation.unwrap(), s.cotton_skew, s.cotton_trace, s.cotton_weyl.unwrap()]);
            let fd = fd_curvature(&g, &x.coords, DUAL_PATH_STEP).unwrap();
            dual = dual.max(fd.ric.max_abs_diff(&b.ric) / b.ric.max_abs().max(1.0));
        }
    }
    line("7 engine identities", univ < 1e-6 && dual < 1e-5, format!("5 random warped metrics × 20 points: universal {univ:.2e} < 1e-6, dual-path Ricci {dual:.2e} < 1e-5"))
}

fn criterion_8() -> Line {
    let mut col = Collector::new(BTreeMap::new());
    checks::run_algebraic(&mut col).unwrap();
    let (results, _) = col.finish();
    let get = |n: &str| results.iter().find(|r| r.name == n).unwrap();
    let lemsum = get("algebraic.lemsum_bound");
    let sign = get("algebraic.lemsum_sign");
    let prod = get("algebraic.symmetric_product");
    let quart = get("algebraic.quartic_sum");
    let cubic = get("algebraic.cubic_expansion");
    let ok = lemsum.points_sampled == 10_000
        && lemsum.residual <= 1e-12
        && sign.residual == 0.0
        && prod.residual < 1e-10
        && quart.residual < 1e-10
        && prod.points_sampled == 50
        && cubic.residual < 1e-12
        && cubic.points_sampled == 100;
    line(
        "8 algebraic suite",
        ok,
        format!(
            "lemsum on 10⁴ tuples ok; family product {:.1e}, quartic {:.1e} < 1e-10; cubic {:.1e} < 1e-12",
            prod.residual, quart.residual, cubic.residual
        ),
    )
}

fn criterion_9() -> Line {
    let mut ok = true;
    let mut notes = Vec::new();
    let cases: [(&str, &[(&str, f64)]); 4] = [
        ("cone", &[]),
        ("hyperbolic-warped", &[]),
        ("cone", &[("kappa", 1.28)]),
        ("hyperbolic-warped", &[("a", 1.0), ("b", 0.5), ("kappa", 1.5)]),
    ];
    for (name, params) in cases {
        let p: BTreeMap<String, f64> = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let Model::Warped { spec, params } = build_model(name, &p).unwrap() else { unreachable!() };
        let mut col = Collector::new(BTreeMap::new());
        checks::run_classification_warped(&mut col, &spec, &params, 50).unwrap();
        let (results, _) = col.finish();
        ok &= results.iter().all(|r| r.passed);
        let prof = results.iter().find(|r| r.name == "classification.inex_profile").unwrap();
        ok &= prof.residual < 1e-6;
        if let Some(f) = results.iter().find(|r| r.name == "classification.inex_forced_constant") {
            notes.push(format!("{name} {}", f.notes));
        }
        notes.push(format!("{name} profile {:.1e}", prof.residual));
    }
    // forced value is negative for the hyperbolic family
    ok &= notes.iter().any(|n| n.contains("forced R = -12"));
    line("9 inex warped profiles", ok, notes.join("; "))
}

fn criterion_10() -> Line {
    let inst = calibrated(hemisphere(3, 2.0).unwrap(), 10);
    let wl = checks::wrong_lambda_control(&inst, 0.1, 30).unwrap();
    let sp = checks::shifted_potential_control(&inst, 0.01, 30).unwrap();
    let ok = wl.perturbed > 1e-3 && wl.baseline < 1e-8 && sp.perturbed > 1e-8 && sp.baseline < 1e-8;
    line(
        "10 negative controls",
        ok,
        format!("λ+0.1 gives defining residual {:.2e} > 1e-3; u+0.01 gives transnormal residual {:.2e} (fails 1e-8)", wl.perturbed, sp.perturbed),
    )
}

#[test]
fn acceptance() {
    let (c5, c5t) = criterion_5();
    let (c6, controls) = criterion_6();
    let lines = [criterion_1(), criterion_2(), criterion_3(), criterion_4(), c5, c5t, c6, criterion_7(), criterion_8(), criterion_9(), criterion_10()];
    for l in &lines {
        println!("[{}] criterion {}: {}", if l.passed { "PASS" } else { "FAIL" }, l.criterion, l.detail);
    }
    for c in &controls {
        println!("       control {}: baseline {:.1e}, perturbed {:.3e}", c.name, c.baseline, c.perturbed);
    }
    // The T ≡ 0 sub-claim is unattainable on the rigid product; everything else must pass.
    let unattainable = ["5 T ≡ 0 on all built-ins"];
    for l in &lines {
        if unattainable.contains(&l.criterion) {
            assert!(l.detail.contains("as predicted: yes"), "T deviates from its prediction: {}", l.detail);
        } else {
            assert!(l.passed, "criterion {} failed: {}", l.criterion, l.detail);
        }
    }
}
