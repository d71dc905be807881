use std::process::{Command, Output};

fn z2sl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_z2sl")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn notes(v: &serde_json::Value) -> Vec<String> {
    v["suites"].as_array().unwrap().iter().flat_map(|s| s["checks"].as_array().unwrap().iter()).filter_map(|c| c["note"].as_str().map(String::from)).collect()
}

#[test]
fn algebra_passes_with_jacobi_summary() {
    let out = z2sl(&["verify", "algebra"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["passed"], true);
    assert!(notes(&v).iter().any(|n| n.contains("1000")), "{:?}", notes(&v));
}

#[test]
fn virasoro_nsnsr_reports_the_constant_table() {
    let out = z2sl(&["verify", "virasoro", "--sector", "nsnsr", "--window", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["suites"][0]["suite"], "virasoro.nsnsr");
    assert!(notes(&v).iter().any(|n| n.contains("k4 = -i") && n.contains("c3 = i/2")));
}

#[test]
fn spectral_lax_reports_lambda_identification() {
    let out = z2sl(&["verify", "lax", "--variant", "spectral"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(notes(&json(&out)).iter().any(|n| n.contains("Lambda10 = 1*(ch psi10 - sh psi01)")));
}

#[test]
fn soldering_exits_one_on_displayed_sign_discrepancies() {
    let out = z2sl(&["verify", "soldering", "--format", "text"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS soldering.currents.J.E+.derived"));
    assert!(text.contains("FAIL soldering.currents.J.E+.printed"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(z2sl(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(z2sl(&["verify", "algebra", "--colour"]).status.code(), Some(2));
    assert_eq!(z2sl(&["verify", "virasoro", "--window", "1"]).status.code(), Some(2));
    assert_eq!(z2sl(&["verify", "virasoro", "--sector", "nsns"]).status.code(), Some(2));
    assert_eq!(z2sl(&["verify", "lax", "--variant", "other"]).status.code(), Some(2));
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_z2sl")).args(["verify", "rep"]).env("Z2L_THREADS", "zero").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_z2sl")).args(["verify", "rep"]).env("Z2L_THREADS", "1").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in [&["verify", "rep"][..], &["verify", "backlund", "--format", "text"], &["verify", "virasoro", "--window", "2"]] {
        let (a, b) = (z2sl(args), z2sl(args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_the_report() {
    let dir = std::env::temp_dir().join(format!("z2sl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rep.json");
    let out = z2sl(&["verify", "rep", "--out", path.to_str().unwrap(), "--timings"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["suites"][0]["checks"][0]["wall_ms"].is_number());
    std::fs::remove_dir_all(&dir).unwrap();
}
