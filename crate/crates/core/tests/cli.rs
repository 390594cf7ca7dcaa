//! End-to-end runs of the `weber` binary.

use std::path::Path;
use std::process::{Command, Output};

use weber_core::cli::report::{read_csv, read_json, Input, Table};

fn weber(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weber")).args(args).output().unwrap()
}

fn csv_of(out: &Output) -> Table {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    read_csv(&String::from_utf8(out.stdout.clone()).unwrap()).unwrap()
}

fn num(input: &Input) -> f64 {
    match input {
        Input::Num(v) => *v,
        Input::Text(t) => panic!("expected a number, got {t}"),
    }
}

#[test]
fn closed_form_matches_oracle_run() {
    let args = ["eval-F", "--nu", "-0.75", "--a", "1", "--x", "2,3", "--s", "-0.5+0i,-0.3-2i"];
    let closed = csv_of(&weber(&args));
    let oracle = csv_of(&weber(&[&args[..], &["--oracle"]].concat()));
    assert_eq!(closed.input_names, ["x", "s_re", "s_im"]);
    assert_eq!(closed.rows.len(), 4);
    for (c, o) in closed.rows.iter().zip(&oracle.rows) {
        assert_eq!(c.inputs, o.inputs);
        assert!((c.value - o.value).norm() <= 1e-6 * c.value.norm(), "{c:?} vs {o:?}");
        assert!(c.converged && o.converged);
    }
    assert_eq!(num(&closed.rows[3].inputs[2]), -2.0);
}

#[test]
fn zero_fixture_solves_to_zero() {
    let table = csv_of(&weber(&["solve", "--fixture", "zero", "--lambda-grid", "0.1:10:5"]));
    assert_eq!(table.rows.len(), 5);
    assert!(table.rows.iter().all(|r| r.value.norm() == 0.0));
}

#[test]
fn roundtrip_recovers_family() {
    let out = weber(&["roundtrip", "--family", "p=2,q=1", "--nu", "-0.75", "--a", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let table = csv_of(&out);
    assert_eq!(table.input_names, ["lambda", "exact", "rel_error"]);
    assert_eq!(table.rows.len(), 20);
    let worst = table.rows.iter().map(|r| num(&r.inputs[2])).fold(0.0, f64::max);
    assert!(worst <= 1e-4, "{worst}");
}

#[test]
fn reports_are_deterministic_across_runs_and_threads() {
    // Same relative output path in fresh directories, so the configs are identical.
    let run = |threads: usize| {
        let dir = tempfile::tempdir().unwrap();
        let out = Command::new(env!("CARGO_BIN_EXE_weber"))
            .args(["forward", "--x", "1.5,2,4,8", "--format", "json", "--output", "out.json"])
            .env("RAYON_NUM_THREADS", threads.to_string())
            .current_dir(dir.path())
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read_to_string(dir.path().join("out.json")).unwrap()
    };
    let first = run(1);
    assert_eq!(first, run(1));
    assert_eq!(first, run(3));
}

#[test]
fn csv_and_json_carry_the_same_rows() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["eval-kernel", "--nu", "-0.6", "--a", "0.5", "--x", "0.5,1,3", "--lambda", "0.1,7"];
    let json = dir.path().join("k.json");
    let csv = dir.path().join("k.csv");
    for (path, format) in [(&json, "json"), (&csv, "csv")] {
        let out = weber(&[&base[..], &["--format", format, "--output", path.to_str().unwrap()]].concat());
        assert!(out.status.success());
    }
    let from_json = read_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let from_csv = read_csv(&std::fs::read_to_string(&csv).unwrap()).unwrap();
    assert_eq!(from_json, from_csv);
    assert_eq!(from_csv.rows.len(), 6);
    // Wronskian at x = a: π a λ K = −2.
    let at_a = &from_csv.rows[0];
    let (x, lambda) = (num(&at_a.inputs[0]), num(&at_a.inputs[1]));
    assert!((std::f64::consts::PI * x * lambda * at_a.value.re + 2.0).abs() < 1e-10);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# run\nnu = -0.6\na = 2\nx = 3, 5\nformat = json\n").unwrap();
    let read = |extra: &[&str]| {
        let out = weber(&[&["eval-kernel", "--config", cfg.to_str().unwrap(), "--lambda", "1"][..], extra].concat());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        serde_json::from_slice::<serde_json::Value>(&out.stdout).unwrap()
    };
    let doc = read(&[]);
    assert_eq!(doc["config"]["params"]["nu"], -0.6);
    assert_eq!(doc["config"]["params"]["a"], 2.0);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 2);
    let doc = read(&["--nu", "-0.7", "--x", "4"]);
    assert_eq!(doc["config"]["params"]["nu"], -0.7);
    assert_eq!(doc["config"]["params"]["a"], 2.0);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 1);
    assert_eq!(doc["schema_version"], 1);
}

fn code(args: &[&str]) -> Option<i32> {
    weber(args).status.code()
}

#[test]
fn exit_codes() {
    // Configuration errors.
    assert_eq!(code(&["eval-kernel", "--x", "2,1", "--lambda", "1"]), Some(2));
    assert_eq!(code(&["eval-F", "--x", "2", "--s", "0.5+0i"]), Some(2));
    assert_eq!(code(&["forward", "--x", "2", "--nu", "0.25"]), Some(2));
    assert_eq!(code(&["solve", "--lambda", "1", "--tol-rel", "2"]), Some(2));
    assert_eq!(code(&["eval-kernel", "--x", "2"]), Some(2));
    assert_eq!(code(&["eval-F", "--x", "2", "--s", "1+i"]), Some(2));
    assert_eq!(code(&["eval-kernel", "--config", "/nonexistent/run.cfg", "--x", "2", "--lambda", "1"]), Some(2));
    assert_eq!(code(&["bogus"]), Some(2));
    // Forced non-convergence: the direct forward transform far out.
    assert_eq!(code(&["forward", "--method", "direct", "--x", "100000"]), Some(3));
    // I/O failure.
    let out = ["eval-kernel", "--x", "2", "--lambda", "1", "--output", "/nonexistent/dir/out.csv"];
    assert_eq!(code(&out), Some(5));
    assert_eq!(code(&["--help"]), Some(0));
}

#[test]
fn verify_passes_and_flags_injected_failures() {
    let out = weber(&["verify", "--seed", "11"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let table = read_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(table.rows.len() >= 9);
    assert!(table.rows.iter().all(|r| r.converged));
    // Coarse quadrature cannot meet the oracle tolerances.
    let out = weber(&["verify", "--seed", "11", "--tol-abs", "1e-3", "--tol-rel", "1e-2"]);
    assert_eq!(out.status.code(), Some(4));
    let table = read_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(table.rows.iter().any(|r| !r.converged));
}

#[test]
fn output_goes_to_the_named_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let out = weber(&["eval-kernel", "--x", "2", "--lambda", "1", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(Path::new(&path).exists());
    assert_eq!(read_csv(&std::fs::read_to_string(&path).unwrap()).unwrap().rows.len(), 1);
}
