//! Command-line behavior: exit codes, JSON output shape, dumps.

use std::path::Path;
use std::process::{Command, Output};

fn opgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn usage_errors_exit_with_code_two() {
    for args in [
        vec!["circle", "--dim", "1"],
        vec!["hw", "--dim", "33"],
        vec!["circle", "--dim", "3", "--j", "3"],
        vec!["sweep", "hw", "--dim-min", "5", "--dim-max", "3"],
        vec!["sweep", "everything", "--dim-min", "2", "--dim-max", "3"],
        vec!["dump", "circle", "foo", "--dim", "2"],
        vec!["dump", "bogus", "w_unitaries", "--dim", "2"],
        vec!["hw", "--dim", "3", "--rank-eps", "0.5"],
        vec!["hw", "--dim", "3", "--residual-eps", "-1"],
        vec!["circle"],
    ] {
        let out = opgraph(&args);
        assert_eq!(exit_code(&out), 2, "args {args:?}: {out:?}");
    }
}

#[test]
fn hw_report_carries_dimension_block() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hw5.json");
    let out = opgraph(&["hw", "--dim", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let json = read_json(&path);
    assert_eq!(json["schema_version"], "1");
    assert_eq!(json["instance"], "hw");
    assert_eq!(json["dimension"]["computed_dim"], 3);
    assert_eq!(json["dimension"]["formula_dim"], 3);
    assert_eq!(json["dimension"]["passed"], true);
    assert!(json.get("wall_time_ms").is_none());
    assert!(json.get("coincidence").is_none());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("overall: PASS"));
}

#[test]
fn circle_report_passes_and_restricts_to_one_seed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c4.json");
    let out = opgraph(&["circle", "--dim", "4", "--quiet", "--out", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    assert!(out.stdout.is_empty());
    let json = read_json(&path);
    assert_eq!(json["coincidence"]["passed"], true);
    assert_eq!(json["coincidence"]["dims"], serde_json::json!([4, 4, 4, 4]));
    let anticliques = json["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "anticliques")
        .unwrap();
    assert_eq!(anticliques["passed"], true);

    let path = dir.path().join("c3j2.json");
    let out = opgraph(&["circle", "--dim", "3", "--j", "2", "--quiet", "--out", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let json = read_json(&path);
    assert_eq!(json["coincidence"]["dims"], serde_json::json!([3]));
}

#[test]
fn hw_sweep_dimensions_follow_the_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.json");
    let out = opgraph(&[
        "sweep", "hw", "--dim-min", "2", "--dim-max", "8", "--quiet", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let json = read_json(&path);
    let dims: Vec<i64> = json
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["dimension"]["computed_dim"].as_i64().unwrap())
        .collect();
    assert_eq!(dims, vec![2, 2, 3, 3, 4, 4, 5]);
}

#[test]
fn hw_sweep_matches_formula_up_to_16() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep16.json");
    let out = opgraph(&[
        "sweep", "hw", "--dim-min", "2", "--dim-max", "16", "--quiet", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    for report in read_json(&path).as_array().unwrap() {
        let d = report["d"].as_i64().unwrap();
        let dim = report["dimension"]["computed_dim"].as_i64().unwrap();
        assert_eq!(dim, d / 2 + 1, "d={d}");
        assert_eq!(report["dimension"]["passed"], true);
    }
}

#[test]
fn circle_sweep_dimension_equals_d() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.json");
    let out = opgraph(&[
        "sweep", "circle", "--dim-min", "2", "--dim-max", "6", "--quiet", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    for report in read_json(&path).as_array().unwrap() {
        let d = report["d"].as_i64().unwrap();
        for dim in report["coincidence"]["dims"].as_array().unwrap() {
            assert_eq!(dim.as_i64().unwrap(), d);
        }
    }
}

#[test]
fn dump_writes_manifest_and_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let out = opgraph(&["dump", "circle", "w_unitaries", "--dim", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let json = read_json(&path);
    assert_eq!(json["object"], "w_unitaries");
    assert_eq!(json["index"], serde_json::json!(["n=0", "n=1"]));
    let first = &json["matrices"][0];
    assert_eq!(first["rows"], 4);
    // W_0 is the identity in row-major [re, im] pairs
    for i in 0..4 {
        for j in 0..4 {
            let want = if i == j { 1.0 } else { 0.0 };
            let entry = &first["entries"][i * 4 + j];
            assert!((entry[0].as_f64().unwrap() - want).abs() < 1e-12);
            assert!(entry[1].as_f64().unwrap().abs() < 1e-12);
        }
    }

    let path = dir.path().join("h.json");
    let out = opgraph(&["dump", "hw", "h_generators", "--dim", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let json = read_json(&path);
    let mats = json["matrices"].as_array().unwrap();
    assert_eq!(mats.len(), 3);
    assert_eq!(mats[0]["rows"], 9);
    // every generator is Hermitian: entries (i,j) and (j,i) conjugate
    for m in mats {
        let entries = m["entries"].as_array().unwrap();
        for i in 0..9 {
            for j in 0..9 {
                let a = entries[i * 9 + j].as_array().unwrap();
                let b = entries[j * 9 + i].as_array().unwrap();
                assert!((a[0].as_f64().unwrap() - b[0].as_f64().unwrap()).abs() < 1e-12);
                assert!((a[1].as_f64().unwrap() + b[1].as_f64().unwrap()).abs() < 1e-12);
            }
        }
    }
    // without --out the dump goes to stdout
    let out = opgraph(&["dump", "circle", "q_projectors", "--dim", "2"]);
    assert_eq!(exit_code(&out), 0);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["instance"], "circle");
}

#[test]
fn larger_dimensions_use_the_sampled_check_paths() {
    // d = 10 exercises the chained shift group law, d = 18 the basis-action
    // order certification for the lifted pair
    let out = opgraph(&["circle", "--dim", "10", "--quiet"]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let out = opgraph(&["hw", "--dim", "18", "--quiet"]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
}

#[test]
fn unwritable_output_exits_with_code_three() {
    let out = opgraph(&["hw", "--dim", "2", "--quiet", "--out", "/nonexistent-dir/x.json"]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn failed_verification_exits_with_code_one() {
    // a residual gate below roundoff level cannot be met
    let out = opgraph(&["hw", "--dim", "2", "--quiet", "--residual-eps", "1e-16"]);
    assert_eq!(exit_code(&out), 1, "{out:?}");
}
