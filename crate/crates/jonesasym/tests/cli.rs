//! End-to-end tests of the command-line binary: output formats, exit codes,
//! and byte-for-byte determinism across runs.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jonesasym"))
        .args(args)
        .env("JONESASYM_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn eval_emits_json_matching_library() {
    let out = run(&["eval", "--knot", "t(2,3)", "--N", "10", "--c", "0+1.5i"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["N"], 10);
    assert_eq!(v["method"], "torus-closed-sum");
    let expected = jonesasym::jones::jones_torus_sum(
        &jonesasym::jones::EvalPoint::new(num_complex::Complex64::new(0.0, 1.5), 10).unwrap(),
        2,
        3,
    )
    .unwrap();
    assert!((v["value"]["re"].as_f64().unwrap() - expected.value.re).abs() < 1e-15);
    assert!((v["value"]["im"].as_f64().unwrap() - expected.value.im).abs() < 1e-15);
}

#[test]
fn eval_connected_sum_uses_composite_method() {
    let out = run(&["eval", "--knot", "fig8#t(2,3)", "--N", "8", "--c", "0.2+0.1i"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["method"], "composite");
}

#[test]
fn eval_contour_method_for_torus() {
    let out = run(&["eval", "--knot", "t(2,3)", "--N", "20", "--c", "0+0.4398229715i", "--method", "contour"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["method"], "torus-contour");
}

#[test]
fn output_is_deterministic_across_runs() {
    let args = ["sweep", "--knot", "fig8", "--c", "0.9624236501+0i", "--n-start", "10", "--n-end", "500", "--n-count", "12"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "sweep output must be byte-identical across runs");
}

#[test]
fn sweep_has_ratio_column_only_on_known_laws() {
    let on = run(&["sweep", "--knot", "fig8", "--c", "0.96242365+0i", "--n-start", "10", "--n-end", "100", "--n-count", "4"]);
    let text = stdout(&on);
    assert!(text.lines().next().unwrap().ends_with("ratio_to_prediction"), "{text}");

    let off = run(&["sweep", "--knot", "fig8", "--c", "0.3+0.3i", "--n-start", "10", "--n-end", "100", "--n-count", "4"]);
    let text = stdout(&off);
    assert_eq!(text.lines().next().unwrap(), "N,re,im,abs,arg");
}

#[test]
fn classify_single_point_reports_regime_and_snap() {
    let out = run(&["classify", "--knot", "fig8", "--c", "0.96242+0i"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["regime"], "PolynomialGrowth");
    assert_eq!(v["exponent"], "2/3");
    let snapped = v["snapped_c"]["re"].as_f64().unwrap();
    assert!((snapped - jonesasym::knot::xi()).abs() < 1e-12);
}

#[test]
fn classify_grid_emits_row_major_csv() {
    let out = run(&["classify", "--knot", "t(2,3)", "--grid", "-1:1:0.5,0:1:0.5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "c_re,c_im,regime,exponent_or_rate");
    assert_eq!(lines.len(), 1 + 15);
    assert!(lines[1].starts_with("-1,0,"));
    assert!(lines[2].starts_with("-0.5,0,"));
}

#[test]
fn asympt_reports_expansion_and_direct_comparison() {
    let out = run(&["asympt", "--a", "2", "--b", "3", "--r", "1/4", "--N", "200", "--kmax", "6"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["route"], "regular-center");
    assert!(v["relative_difference"].as_f64().unwrap() < 1e-6);

    let pole = run(&["asympt", "--a", "2", "--b", "3", "--r", "1/6", "--N", "200"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&pole)).unwrap();
    assert_eq!(v["route"], "pole-center");

    let kt = run(&["asympt", "--a", "2", "--b", "3", "--r", "1", "--N", "100"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&kt)).unwrap();
    assert_eq!(v["route"], "kashaev-tirkkonen");
}

#[test]
fn parse_errors_exit_2() {
    for args in [
        vec!["eval", "--knot", "t(2,", "--N", "5", "--c", "0+0.1i"],
        vec!["eval", "--knot", "fig8", "--N", "5", "--c", "bogus"],
        vec!["asympt", "--a", "2", "--b", "3", "--r", "0.25", "--N", "100"],
        vec!["verify", "--only", "no-such-criterion"],
        vec!["classify", "--knot", "fig8"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn numeric_domain_errors_exit_3() {
    for args in [
        // Integer r has no implemented expansion beyond r = 1.
        vec!["asympt", "--a", "2", "--b", "3", "--r", "2", "--N", "100"],
        // The contour route rejects non-torus knots.
        vec!["eval", "--knot", "fig8", "--N", "10", "--c", "0+0.3i", "--method", "contour"],
        // Integer r = c/(2πi) is outside the contour route's domain.
        vec!["eval", "--knot", "t(2,3)", "--N", "10", "--c", "0+6.2831853071795865i", "--method", "contour"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(3), "args {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn verify_single_criterion_runs_quick() {
    let out = run(&["verify", "--quick", "--only", "gamma-anchor"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 1);
    assert_eq!(arr[0]["criterion"], "gamma-anchor");
    assert_eq!(arr[0]["pass"], true);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("PASS"), "per-criterion line goes to stderr: {err}");
}
