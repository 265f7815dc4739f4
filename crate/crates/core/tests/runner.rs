use qem_core::runner::{list_checks, list_models, run, Report, RunConfig};
use qem_core::verify::checks::CHECK_CATALOG;
use qem_core::{Error, Suite};

#[test]
fn hemisphere_defining_suite_passes() {
    let cfg = RunConfig::new("hemisphere").param("n", 3.0).param("m", 2.0).suite(Suite::Defining);
    let r = run(&cfg).unwrap();
    assert!(r.all_passed(), "{}", r.to_text());
    assert!(r.calibration.passed);
    assert!(r.checks.iter().all(|c| c.name.starts_with("defining.")));
    assert_eq!(r.config.params["n"], 3.0);
}

#[test]
fn reports_are_reproducible_and_round_trip() {
    let cfg = RunConfig::new("doubly-warped").points(12);
    let a = run(&cfg).unwrap();
    let b = run(&cfg).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(Report::from_json(&a.to_json()).unwrap(), a);
    let s = a.summary;
    assert_eq!(s.total, a.checks.len());
    assert_eq!(s.passed, a.checks.iter().filter(|c| c.passed).count());
    assert_eq!(s.failed + s.passed, s.total);
    assert_eq!(s.skipped, a.skipped.len());
    let names: Vec<_> = a.checks.iter().map(|c| c.name.as_str()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    let v: serde_json::Value = serde_json::from_str(&a.to_json()).unwrap();
    for key in ["config", "calibration", "checks", "summary"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    for key in ["name", "residual", "tolerance", "passed", "paper_anchor"] {
        assert!(v["checks"][0].get(key).is_some(), "{key}");
    }
}

#[test]
fn every_catalog_check_is_emitted_or_skipped_on_the_rigid_product() {
    let r = run(&RunConfig::new("doubly-warped").points(8)).unwrap();
    for c in CHECK_CATALOG {
        let hit = r.checks.iter().any(|x| x.name == c.name) || r.skipped.iter().any(|x| x.name == c.name);
        assert!(hit, "{}", c.name);
    }
    assert!(r.skipped.iter().any(|s| s.name == "tensors.t_vanishes"));
}

#[test]
fn tolerance_override_can_force_failure() {
    let mut cfg = RunConfig::new("hemisphere").suite(Suite::Defining).points(5);
    cfg.tolerances.insert("defining.equation".into(), 0.0);
    let r = run(&cfg).unwrap();
    let eq = r.checks.iter().find(|c| c.name == "defining.equation").unwrap();
    assert_eq!(eq.tolerance, 0.0);
    assert!(!eq.passed && !r.all_passed());
}

#[test]
fn configuration_errors() {
    assert!(matches!(run(&RunConfig::new("nope")), Err(Error::Config { .. })));
    assert!(matches!(run(&RunConfig::new("hemisphere").points(0)), Err(Error::Config { .. })));
    let e = run(&RunConfig::new("cylinder").param("m", 0.5)).unwrap_err();
    assert_eq!(e.to_string(), "configuration error at model.m: m must exceed 1");
    assert!("bogus".parse::<Suite>().is_err());
}

#[test]
fn listings_are_stable() {
    let models = list_models();
    assert_eq!(models.lines().count(), 6);
    assert_eq!(list_models(), models);
    let checks = list_checks();
    assert_eq!(checks.lines().count(), CHECK_CATALOG.len());
    assert!(CHECK_CATALOG.iter().all(|c| !c.anchor.is_empty()));
}
