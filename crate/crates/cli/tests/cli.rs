use std::io::Write;

use boxball_cli::run_cli;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("boxball").chain(args.iter().copied());
    let code = run_cli(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn occupied(bits: &str) -> Vec<usize> {
    bits.chars()
        .enumerate()
        .filter(|&(_, c)| c == '1')
        .map(|(i, _)| i + 1)
        .collect()
}

fn without_metadata(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("metadata");
    v
}

#[test]
fn evolve_orbit() {
    let (code, out, _) = run(&["evolve", "--config", "0110111000100", "--sweeps", "3"]);
    assert_eq!(code, 0);
    let rows: Vec<Vec<usize>> = out
        .lines()
        .map(|l| occupied(l.split_whitespace().last().unwrap()))
        .collect();
    assert_eq!(
        rows,
        vec![
            vec![2, 3, 5, 6, 7, 11],
            vec![4, 8, 9, 10, 12, 13],
            vec![5, 11, 14, 15, 16, 17],
            vec![6, 12, 18, 19, 20, 21],
        ]
    );
}

#[test]
fn evolve_stabilize_and_json() {
    let (code, out, _) = run(&["evolve", "--config", "0110111000100", "--stabilize"]);
    assert_eq!(code, 0);
    assert!(out.contains("soliton lengths 1,1,4"), "{out}");

    let (code, out, _) = run(&[
        "evolve", "--config", "1101", "--sweeps", "2", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["orbit"].as_array().unwrap().len(), 3);
    assert_eq!(v["orbit"][0]["occupied"], serde_json::json!([1, 2, 4]));

    let (code, out, _) = run(&["evolve", "--config", "1101", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("sweep,config"));
}

#[test]
fn config_from_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "101110110000").unwrap();
    let arg = format!("@{}", f.path().display());
    let (code, out, _) = run(&["diagram", "--config", &arg]);
    assert_eq!(code, 0);
    assert!(out.contains("λ=4,1,1"));
}

#[test]
fn diagram_routes_agree() {
    let (code, out, _) = run(&["diagram", "--config", "101110110000", "--method", "all"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.matches("λ=4,1,1").count(), 6);
    assert_eq!(out.lines().last(), Some("consistent"));

    let (code, out, _) = run(&["diagram", "--config", "101110110000", "--method", "rsk"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().collect::<Vec<_>>(), ["λ=4,1,1", "ρ=3,1,1,1"]);

    let (code, out, _) = run(&[
        "diagram", "--config", "101110110000", "--method", "all", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["consistent"], Value::Bool(true));
}

#[test]
fn perm_of_config() {
    let (code, out, _) = run(&["perm", "--config", "101110110"]);
    assert_eq!(code, 0);
    let first = out.lines().next().unwrap();
    assert!(first.ends_with("1 4 6 5 3 2"), "{first}");
    assert!(out.contains("1 6 5 2 4 3"));

    let (code, out, _) = run(&["perm", "--perm", "2 3 1"]);
    assert_eq!(code, 0);
    assert!(out.contains("λ=2,1"));

    let (code, _, _) = run(&["perm", "--perm", "1 1 2"]);
    assert_eq!(code, 1);
}

#[test]
fn sample_seed_forms() {
    let hex = run(&["sample", "dyck", "--n", "8", "--seed", "0x1f"]);
    let dec = run(&["sample", "dyck", "--n", "8", "--seed", "31"]);
    assert_eq!(hex.0, 0);
    assert_eq!(hex.1, dec.1);
    let other = run(&["sample", "config", "--n", "64", "--seed", "32"]);
    let again = run(&["sample", "config", "--n", "64", "--seed", "32"]);
    assert_eq!(other.1, again.1);
    assert_eq!(other.1.trim().len(), 64);
    let (code, _, _) = run(&["sample", "dyck", "--seed", "0xzz"]);
    assert_eq!(code, 1);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["evolve", "--config", "0120"]).0, 1);
    assert_eq!(run(&["evolve", "--bogus"]).0, 1);
    assert_eq!(run(&["evolve", "--config", "01", "--sweeps", "2", "--stabilize"]).0, 1);
    assert_eq!(run(&["nonsense"]).0, 1);
    let (code, _, err) = run(&[
        "experiment", "columns-critical", "--p", "0.3", "--n", "100", "--trials", "4",
    ]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error:"));
    assert_eq!(run(&["experiment", "rows", "--threads", "0"]).0, 1);
}

#[test]
fn help_succeeds() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("experiment"));
    let (code, out, _) = run(&["experiment", "--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("--check"));
}

#[test]
fn experiment_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let base = ["experiment", "rows", "--n", "300", "--trials", "12", "--seed", "7"];
    let mut args_a = base.to_vec();
    let pa = a.to_str().unwrap();
    args_a.extend(["--out", pa, "--threads", "1"]);
    let mut args_b = base.to_vec();
    let pb = b.to_str().unwrap();
    args_b.extend(["--out", pb, "--threads", "3"]);
    assert_eq!(run(&args_a).0, 0);
    assert_eq!(run(&args_b).0, 0);
    let va: Value = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    let vb: Value = serde_json::from_str(&std::fs::read_to_string(&b).unwrap()).unwrap();
    assert_eq!(va["per_trial"].as_array().unwrap().len(), 12);
    assert_eq!(without_metadata(va), without_metadata(vb));

    let mut json = base.to_vec();
    json.extend(["--format", "json"]);
    let (_, x, _) = run(&json);
    let (_, y, _) = run(&json);
    let x: Value = serde_json::from_str(&x).unwrap();
    let y: Value = serde_json::from_str(&y).unwrap();
    assert_eq!(without_metadata(x), without_metadata(y));
}

#[test]
fn check_flag_reports_failure() {
    // Far too few boxes for the row densities to settle.
    let (code, out, _) = run(&[
        "experiment", "rows", "--n", "40", "--trials", "3", "--seed", "5", "--check",
    ]);
    assert_eq!(code, 2, "{out}");
    assert!(out.contains("FAIL"));
    let (code, _, _) = run(&["experiment", "rows", "--n", "40", "--trials", "3", "--seed", "5"]);
    assert_eq!(code, 0);
}

#[test]
fn cdf_dir_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, _, _) = run(&[
        "experiment", "rows-clt", "--n", "200", "--trials", "20", "--cdf-dir", d,
    ]);
    assert_eq!(code, 0);
    let n = std::fs::read_dir(dir.path()).unwrap().count();
    assert!(n >= 1);
}
