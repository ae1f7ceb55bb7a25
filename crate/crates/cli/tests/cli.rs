use std::process::{Command, Output};

fn schwinger(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schwinger")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn su3_octet_dimension() {
    let o = schwinger(&["su3", "dim", "1", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "8");
}

#[test]
fn no_common_once_irrep_for_su4() {
    let o = schwinger(&["sun", "obstruction", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "none");
}

#[test]
fn su3_obstruction_has_witness() {
    let o = schwinger(&["sun", "obstruction", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["n"], 3);
    assert_eq!(v["witness"]["n"], 2);
}

#[test]
fn usage_errors_exit_2() {
    for args in [&["bogus"][..], &["su3", "dim", "x", "1"], &["--grid", "1,2", "verify"], &["verify", "nope"], &[]] {
        let o = schwinger(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn help_exits_0() {
    assert_eq!(schwinger(&["--help"]).status.code(), Some(0));
}

#[test]
fn bad_angles_exit_2() {
    let o = schwinger(&["dmat", "--j", "1", "--euler", "0,4,0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dmat_spin_half_matches_closed_form() {
    let (a, b, g) = (0.3_f64, 1.1_f64, 2.0_f64);
    let o = schwinger(&["dmat", "--j", "1/2", "--euler", &format!("{a},{b},{g}")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let z = |r: usize, c: usize| (v["matrix"][r][c][0].as_f64().unwrap(), v["matrix"][r][c][1].as_f64().unwrap());
    // xi = e^{-i(a+g)/2} cos(b/2) sits at (m, n) = (1/2, 1/2)
    let (re, im) = z(0, 0);
    let (c, phase) = ((b / 2.0).cos(), -(a + g) / 2.0);
    assert!((re - c * phase.cos()).abs() < 1e-15 && (im - c * phase.sin()).abs() < 1e-15);
}

#[test]
fn output_is_deterministic() {
    let runs = [
        &["majorana", "to-constellation", "--two-j", "5", "--seed", "7"][..],
        &["dmat", "--j", "3/2", "--seed", "3"],
        &["weyl", "trace", "--op", "random", "--jmax", "1/2"],
        &["ybasis", "--jmax", "1/2", "--format", "csv"],
        &["verify", "sun_structure", "--seed", "9"],
    ];
    for args in runs {
        let (a, b) = (schwinger(args), schwinger(args));
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn seed_changes_random_inputs() {
    let a = schwinger(&["dmat", "--j", "1", "--seed", "1"]);
    let b = schwinger(&["dmat", "--j", "1", "--seed", "2"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn majorana_round_trip_through_cli() {
    let con = schwinger(&["majorana", "to-constellation", "--two-j", "4"]);
    let state = schwinger(&["majorana", "to-state", "--input", &stdout(&con)]);
    assert_eq!(state.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&state)).unwrap();
    assert_eq!(v["two_j"], 4);
    assert_eq!(v["coeffs"].as_array().unwrap().len(), 5);
}

#[test]
fn passing_suite_exits_0() {
    let o = schwinger(&["verify", "group_core"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["suite"], "group_core");
    for c in v["checks"].as_array().unwrap() {
        assert_eq!(c["pass"], true);
        assert!(c.get("runtime_s").is_none());
    }
}

#[test]
fn under_resolved_grid_fails_with_exit_1() {
    let o = schwinger(&["verify", "group_core", "--grid", "2,2,2"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["checks"].as_array().unwrap().iter().any(|c| c["pass"] == false));
}

#[test]
fn csv_output_has_header_and_rows() {
    let o = schwinger(&["su3", "multiplets", "1", "1", "--format", "csv"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "r,s,two_I,three_Y");
    assert_eq!(lines.len(), 5);
}
