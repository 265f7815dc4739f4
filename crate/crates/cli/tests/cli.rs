use std::process::Command;

fn qem(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qem")).args(args).output().expect("binary runs")
}

#[test]
fn check_defining_on_hemisphere_exits_zero() {
    let out = qem(&["check", "--model", "hemisphere", "--n", "3", "--m", "2", "--suite", "defining"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS defining.equation"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn list_scalars_for_n4() {
    let out = qem(&["list-scalars", "--n", "4", "--m", "2", "--lambda", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<_> = text.lines().collect();
    assert_eq!(rows, ["k=0 R=2.4000000000", "k=1 R=2.5000000000 (excluded)", "k=2 R=2.6666666667", "k=3 R=3.0000000000"]);
}

#[test]
fn m_at_most_one_is_a_config_error() {
    let out = qem(&["check", "--model", "hemisphere", "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("m must exceed 1"));
}

#[test]
fn failing_check_gives_nonzero_exit() {
    let out = qem(&["check", "--model", "hemisphere", "--suite", "defining", "--points", "5", "--tol", "defining.equation=0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn json_output_file_parses_and_is_reproducible() {
    let dir = std::env::temp_dir();
    let a = dir.join(format!("qem-a-{}.json", std::process::id()));
    let b = dir.join(format!("qem-b-{}.json", std::process::id()));
    for p in [&a, &b] {
        let out = qem(&["check", "--model", "cone", "--param", "alpha=0.7", "--format", "json", "--points", "10", "--output", p.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let ja = std::fs::read_to_string(&a).unwrap();
    assert_eq!(ja, std::fs::read_to_string(&b).unwrap());
    assert!(ja.contains("\"paper_anchor\""));
    assert!(ja.contains("\"alpha\": 0.7"));
    let _ = std::fs::remove_file(a);
    let _ = std::fs::remove_file(b);
}

#[test]
fn listings() {
    let out = qem(&["list-models"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["hemisphere", "cylinder", "doubly-warped", "product-excg", "cone", "hyperbolic-warped"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
    let out = qem(&["list-checks"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("tensors.t_spectrum"));
}

#[test]
fn unknown_suite_is_rejected() {
    let out = qem(&["check", "--model", "hemisphere", "--suite", "everything"]);
    assert_eq!(out.status.code(), Some(2));
}
