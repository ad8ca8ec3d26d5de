use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn roughsum(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_roughsum"))
        .args(args)
        .current_dir(cwd)
        .env_remove("ROUGHSUM_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn without_runtime(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("runtime_ms");
    v
}

#[test]
fn pvar_reads_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("z.csv"), "0\n1\n0\n1\n").unwrap();
    fs::write(dir.path().join("z.json"), "[[0],[1],[0],[1]]").unwrap();
    for file in ["z.csv", "z.json"] {
        let v = json(&roughsum(&["pvar", "--input", file, "--p", "2"], dir.path()));
        assert_eq!(v["power_sum"], 3.0);
        assert_eq!(v["partition"], serde_json::json!([0, 1, 2, 3]));
        assert_eq!(v["schema_version"], 1);
    }
    let v = json(&roughsum(&["pvar", "--input", "z.csv", "--p", "1", "--from", "1", "--to", "3"], dir.path()));
    assert_eq!(v["power_sum"], 2.0);
    let out = roughsum(&["--emit", "csv", "pvar", "--input", "z.csv", "--p", "2"], dir.path());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "p,from,to,power_sum,norm\n2.0,0,3,3.0,1.7320508075688772\n");
}

#[test]
fn area_of_square_corner() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.csv"), "0,0\n1,0\n1,1\n").unwrap();
    let v = json(&roughsum(&["area", "--input", "c.csv"], dir.path()));
    assert_eq!(v["area"], serde_json::json!([[0.0, 0.5], [-0.5, 0.0]]));
    let rough = v["rough_norm_sq"].as_f64().unwrap();
    assert!((rough - (2.0 + 0.5f64.sqrt())).abs() < 1e-15);
}

#[test]
fn dyadic_golden_output() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&roughsum(&["dyadic", "--from", "3", "--to", "8"], dir.path()));
    let expected = serde_json::json!({
        "schema_version": 1,
        "interval": [3, 8],
        "n_of": 2,
        "peak": 8,
        "peaked": [[3, 4], [4, 8]],
        "greedy": [[3, 4], [4, 8]],
        "bisection": {"parts": [[3, 4], [4, 8]], "enclosing": [[3, 4], [4, 8]]},
        "b_set_size": 8,
        "tilde_set_size": 9
    });
    assert_eq!(v, expected);
    let v = json(&roughsum(&["dyadic", "--from", "4", "--to", "8"], dir.path()));
    assert_eq!(v["bisection"], Value::Null);
}

#[test]
fn series_and_norm_commands() {
    let dir = tempfile::tempdir().unwrap();
    let out = roughsum(&["series", "finite2var", "--n-max", "1"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("index,re,im"));
    assert_eq!(text.lines().count(), 6);
    fs::write(dir.path().join("c.csv"), &text).unwrap();

    let v = json(&roughsum(
        &["series", "path", "--coeffs", "c.csv", "--system", "fourier", "--theta", "3.141592653589793"],
        dir.path(),
    ));
    assert_eq!(v.as_array().unwrap().len(), 5);
    let v = json(&roughsum(
        &["series", "path", "--coeffs", "c.csv", "--system", "discrete", "--omega", "2", "--m", "8", "--seed", "4"],
        dir.path(),
    ));
    assert_eq!(v.as_array().unwrap()[0].as_array().unwrap().len(), 1);
    let out = roughsum(&["series", "path", "--coeffs", "c.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    let v = json(&roughsum(&["norm", "--coeffs", "c.csv", "--s", "0.5", "--method", "direct", "--M", "512"], dir.path()));
    let (spectral, direct) = (v["spectral"].as_f64().unwrap(), v["direct"].as_f64().unwrap());
    assert_eq!(v["value"].as_f64().unwrap(), direct);
    assert!((spectral - direct).abs() < 0.03 * spectral);
    assert!((v["gap"].as_f64().unwrap() - (spectral - direct).abs()).abs() < 1e-12);
}

#[test]
fn experiment_writes_report_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = roughsum(&["exp", "example_local", "--theta", "3.14159", "--n-max", "12", "--out", "r"], dir.path());
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["details"].as_array().unwrap().len(), 7);
    let file: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("r/example_local.json")).unwrap()).unwrap();
    assert_eq!(without_runtime(file), without_runtime(v));

    let failing = roughsum(
        &["exp", "area_blowup", "--n-max", "2", "--set", "area_factor=100", "--out", "r"],
        dir.path(),
    );
    assert_eq!(failing.status.code(), Some(1));
    assert_eq!(roughsum(&["exp", "nope"], dir.path()).status.code(), Some(2));
    assert_eq!(roughsum(&["exp", "theorem1", "--set", "bogus=1"], dir.path()).status.code(), Some(2));
    assert_eq!(roughsum(&["nosuch"], dir.path()).status.code(), Some(2));
    assert_eq!(roughsum(&["pvar", "--p", "2"], dir.path()).status.code(), Some(2));
}

#[test]
fn experiment_output_is_independent_of_threads() {
    let dir = tempfile::tempdir().unwrap();
    let args = |threads: &'static str| {
        ["--threads", threads, "exp", "theorem1", "--trials", "8", "--m", "32", "--n", "20", "--seed", "5", "--out", "r"]
    };
    let one = without_runtime(json(&roughsum(&args("1"), dir.path())));
    let four = without_runtime(json(&roughsum(&args("4"), dir.path())));
    assert_eq!(one, four);
    assert_eq!(one["config"]["seed"], "5");
}

#[test]
fn config_file_and_output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("cfg.txt"), "# small run\nn_min = 2\nn_max = 5\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_roughsum"))
        .args(["--emit", "csv", "exp", "example_local", "--config", "cfg.txt", "--set", "n_max=4"])
        .current_dir(dir.path())
        .env("ROUGHSUM_OUT_DIR", dir.path().join("env_out"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("env_out/example_local.csv")).unwrap();
    assert_eq!(csv, String::from_utf8(out.stdout).unwrap());
    assert_eq!(csv.lines().next(), Some("name,label,lhs,rhs,ratio,pass"));
    assert_eq!(csv.lines().count(), 1 + 1 + 3);
}
