use derivcone::cli::{run, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};
use derivcone::lmi::json::from_json;
use derivcone::lmi::sdpa::from_sdpa;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = vec![];
    let mut err = vec![];
    let mut full = vec!["derivcone"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cli(&[]).0, EXIT_USAGE);
    assert_eq!(cli(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(cli(&["member", "--spec", "orthant:3:1", "--point", "1,2"]).0, EXIT_USAGE);
    assert_eq!(cli(&["represent", "--spec", "psd:3:4"]).0, EXIT_USAGE);
    assert_eq!(cli(&["represent", "--spec", "psd:3:1", "--strategy", "sideways"]).0, EXIT_USAGE);
    assert_eq!(cli(&["solve"]).0, EXIT_USAGE);
    let (code, _, err) = cli(&["verify", "--suite", "nope"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("unknown suite"));
}

#[test]
fn help_and_version_exit_0() {
    let (code, out, _) = cli(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("represent"));
    assert_eq!(cli(&["--version"]).0, EXIT_OK);
}

#[test]
fn failing_suite_exits_1() {
    // with no points the canary has nothing to catch
    let (code, out, _) = cli(&["verify", "--suite", "canary", "--points", "0"]);
    assert_eq!(code, EXIT_FAILURE);
    assert!(out.contains("FAIL canary"));
}

#[test]
fn represent_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = cli(&["represent", "--spec", "psd:4:1", "--strategy", "deriv", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("deriv  28"));
    let rep = from_json(&std::fs::read_to_string(dir.path().join("representation.json")).unwrap()).unwrap();
    assert_eq!(rep.size(), 28);
    let p = from_sdpa(&std::fs::read_to_string(dir.path().join("representation.dat-s")).unwrap()).unwrap();
    assert_eq!(p.n_vars, rep.n_vars());
    assert!(dir.path().join("sizes.txt").exists());

    let (code, out, _) = cli(&["represent", "--spec", "ellipse:3", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["spec"]["kind"], "spectrahedral");
}

#[test]
fn member_agrees_with_oracle() {
    let (code, out, _) = cli(&["member", "--spec", "psd:3:1", "--point", "1,0,0,1,0,1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("agreement: yes"));

    let (code, out, _) = cli(&["member", "--spec", "orthant:3:1", "--point", "1,1,-5", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["oracle_decision"], "Out");
    assert_eq!(v["representation_member"], false);
    assert_eq!(v["agreement"], true);

    // full n^2 input is accepted for matrix cones
    let (code, out, _) = cli(&["member", "--spec", "psd:2:0", "--point", "2,1,1,2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("-> In"));

    let (code, out, _) = cli(&["member", "--spec", "dual-orthant:3:1", "--point", "1,1,1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("distance to image"));
}

#[test]
fn solve_cone_program_and_sdpa() {
    // minimum eigenvalue of diag(3, 1) over trace-one PSD matrices
    let (code, out, _) = cli(&["solve", "--spec", "psd:2:0", "--objective", "3,0,0,1", "--eq", "1,0,0,1=1"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "Optimal");
    assert!((v["report"]["objective_value"].as_f64().unwrap() - 1.0).abs() < 1e-7);

    let (_, out, _) = cli(&["solve", "--spec", "orthant:2:0", "--objective", "1,1", "--maximize"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "Unbounded");
    assert_eq!(v["unbounded"], true);

    let dir = tempfile::tempdir().unwrap();
    let dat = dir.path().join("p.dat-s");
    std::fs::write(&dat, "1\n1\n-1\n1.0\n0 1 1 1 2.0\n1 1 1 1 1.0\n").unwrap();
    let res = dir.path().join("res.json");
    let (code, _, _) = cli(&["solve", "--sdpa", dat.to_str().unwrap(), "--out", res.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&res).unwrap()).unwrap();
    assert!((v["report"]["objective_value"].as_f64().unwrap() - 2.0).abs() < 1e-7);

    let bad = dir.path().join("bad.dat-s");
    std::fs::write(&bad, "1\n1\n-1\n1.0\n0 1 1\n").unwrap();
    assert_eq!(cli(&["solve", "--sdpa", bad.to_str().unwrap()]).0, EXIT_USAGE);
}

#[test]
fn boundary_csv() {
    let (code, out, _) = cli(&["boundary", "--spec", "ellipse:1", "--count", "8"]);
    assert_eq!(code, EXIT_OK);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("theta,dir_x,dir_y,x,y,objective,status"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 8);
    for r in rows {
        let f: Vec<&str> = r.split(',').collect();
        assert_eq!(f.len(), 7);
        let (x, y): (f64, f64) = (f[3].parse().unwrap(), f[4].parse().unwrap());
        assert!(x.is_finite() && y.is_finite());
    }
    assert_eq!(cli(&["boundary", "--spec", "psd:2:0"]).0, EXIT_USAGE);
}

#[test]
fn seeded_runs_repeat() {
    let a = cli(&["boundary", "--spec", "ellipse:0", "--count", "4", "--seed", "9"]);
    let b = cli(&["boundary", "--spec", "ellipse:0", "--count", "4", "--seed", "9"]);
    assert_eq!(a, b);
    let a = cli(&["verify", "--suite", "oracle", "--points", "20", "--n-max", "4", "--seed", "5"]);
    assert_eq!(a.0, EXIT_OK);
    assert_eq!(a, cli(&["verify", "--suite", "oracle", "--points", "20", "--n-max", "4", "--seed", "5"]));
}

#[test]
fn verify_all_suites_pass() {
    let (code, out, _) = cli(&["verify", "--points", "30", "--n-max", "5", "--format", "json"]);
    assert_eq!(code, EXIT_OK, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v.as_array().unwrap().iter().all(|r| r["passed"] == true));
}
