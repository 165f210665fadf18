//! Command-line behaviour through the library entry point.

use std::fs;

use h2ion::cli::run;

fn arg_list(args: &[&str]) -> Vec<String> {
    std::iter::once("h2ion").chain(args.iter().copied()).map(String::from).collect()
}

#[test]
fn solve_writes_one_record() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("solve.csv");
    let code = run(arg_list(&["solve", "--state", "1ssg", "--R", "2.0", "-o", out.to_str().unwrap()]));
    assert_eq!(code, 0);
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# tool: h2ion"));
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data.len(), 2);
    assert!(data[0].contains("E_total_Ry"));
    assert!(data[1].contains("-1.2052684289"), "{}", data[1]);
}

#[test]
fn solve_with_verification_in_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("solve.json");
    let code = run(arg_list(&["solve", "--state", "2psu", "--R", "2.0", "--verify", "--format", "json", "-o", out.to_str().unwrap()]));
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let d = v["records"][0]["dE_oracle_Ry"].as_f64().unwrap();
    assert!(d <= 1e-9);
}

#[test]
fn usage_errors_exit_nonzero() {
    assert_ne!(run(arg_list(&["solve", "--state", "3dsg", "--R", "2"])), 0);
    assert_ne!(run(arg_list(&["curve", "--state", "1ssg", "--grid", "2,-1"])), 0);
    assert_ne!(run(arg_list(&["curve", "--state", "1ssg"])), 0);
}

#[test]
fn output_is_deterministic_and_single_point_curve_matches_solve() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let s = dir.path().join("s.csv");
    for p in [&a, &b] {
        assert_eq!(run(arg_list(&["curve", "--state", "2psu", "--grid", "2.0,4.0", "-o", p.to_str().unwrap()])), 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(run(arg_list(&["curve", "--state", "1ssg", "--R", "2.0", "-o", a.to_str().unwrap()])), 0);
    assert_eq!(run(arg_list(&["solve", "--state", "1ssg", "--R", "2.0", "-o", s.to_str().unwrap()])), 0);
    let rows = |p: &std::path::Path| fs::read_to_string(p).unwrap().lines().filter(|l| !l.starts_with('#')).map(String::from).collect::<Vec<_>>();
    assert_eq!(rows(&a), rows(&s));
}

#[test]
fn correction_writes_four_anchored_profiles() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(arg_list(&["correction", "--state", "1ssg", "--R", "2.0", "--dir", dir.path().to_str().unwrap()])), 0);
    let mut names: Vec<String> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["phi1_1ssg_R2.dat", "rho1_1ssg_R2.dat", "x0_1ssg_R2.dat", "y0_1ssg_R2.dat"]);
    let phi = fs::read_to_string(dir.path().join("phi1_1ssg_R2.dat")).unwrap();
    let first: Vec<f64> = phi.lines().find(|l| !l.starts_with('#')).unwrap().split_whitespace().map(|v| v.parse().unwrap()).collect();
    assert_eq!(first, [1.0, 0.0]);
}

#[test]
fn oscillator_at_two_bohr() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.csv");
    assert_eq!(run(arg_list(&["oscillator", "--R", "2.0", "-o", out.to_str().unwrap()])), 0);
    let text = fs::read_to_string(&out).unwrap();
    let row = text.lines().last().unwrap();
    let f: f64 = row.split(',').nth(5).unwrap().parse().unwrap();
    assert!(((f - 0.639527) / 0.639527).abs() < 1e-4);
}
