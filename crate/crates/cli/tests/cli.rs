use std::process::{Command, Output};

fn octokern(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_octokern"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn canonical(out: &Output) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    v["elapsed_ms"] = 0.into();
    v
}

#[test]
fn passing_suite_exits_zero_with_json() {
    let out = octokern(&["algebra", "--trials", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let v = canonical(&out);
    assert_eq!(v["command"], "algebra");
    assert_eq!(v["seed"], 42);
    assert!(v["results"].as_array().unwrap().iter().all(|r| r["pass"] == true));
}

#[test]
fn output_is_independent_of_threads() {
    let args = ["--samples", "5000", "reproduce", "--experiment", "szego_ball"];
    let one = octokern(&[&["--threads", "1"], &args[..]].concat());
    let four = octokern(&[&["--threads", "4"], &args[..]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(canonical(&one), canonical(&four));
}

#[test]
fn seed_changes_monte_carlo_output() {
    let a = octokern(&["--samples", "2000", "--seed", "1", "reproduce", "--experiment", "cauchy_ball"]);
    let b = octokern(&["--samples", "2000", "--seed", "2", "reproduce", "--experiment", "cauchy_ball"]);
    assert_ne!(canonical(&a)["results"], canonical(&b)["results"]);
}

#[test]
fn failed_check_exits_one() {
    // at z = w = 1 the fitted Szegő exponent is outside its window
    let out = octokern(&["limits"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL szego_decay_exponent"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["algebra", "--trials", "0"][..],
        &["limits", "--d-values"],
        &["--samples", "10", "reproduce", "--experiment", "cauchy_ball"],
        &["--tail-tol", "0", "trig"],
        &["--fd-step", "-1", "trig"],
        &["--threads", "0", "algebra"],
        &["eval", "--kernel", "szego_strip", "--z", "0.5", "--w", "0.5"],
        &["eval", "--kernel", "nope", "--z", "0.5", "--w", "0.5"],
        &["reproduce", "--experiment", "nope"],
    ] {
        let out = octokern(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn domain_errors_exit_two() {
    let out = octokern(&["eval", "--kernel", "szego_strip", "--z", "1.5", "--w", "0.5", "--d", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = octokern(&["eval", "--kernel", "szego_halfspace", "--z", "-1", "--w", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn octonion_arguments_accept_basis_notation() {
    let out = octokern(&["eval", "--kernel", "szego_halfspace", "--z", "1 + 0.5 e3", "--w", "0.5 - 0.2 e7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = canonical(&out);
    assert_eq!(v["params"]["z"][3], 0.5);
    assert_eq!(v["params"]["w"][7], -0.2);
}

#[test]
fn csv_has_fixed_columns() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("limits.csv");
    let out = octokern(&["--csv", path.to_str().unwrap(), "limits", "--d-values", "2,4", "--z", "0.5", "--w", "0.5"]);
    assert!(out.status.code().is_some());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,d,value,target,residual"));
    let first = lines.next().unwrap();
    assert!(first.starts_with("szego_gap,2,"), "{first}");
}
