use std::path::Path;
use std::process::{Command, Output};

use sdeinv_core::invariants::evaluate_invariant;
use sdeinv_core::{JetGerm, Which};

fn sdeinv(args: &[&str]) -> Output {
    sdeinv_in(args, None)
}

fn sdeinv_in(args: &[&str], config: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sdeinv"));
    cmd.args(args).env_remove("SDEINV_CONFIG");
    if let Some(c) = config {
        cmd.env("SDEINV_CONFIG", c);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn poincare_sde_coefficients() {
    let o = sdeinv(&["poincare", "--family", "sde", "--terms", "8"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "0,0,4,20,46,74,108,148");
}

#[test]
fn hilbert_conformal_values() {
    let o = sdeinv(&["hilbert", "--family", "conformal", "--kmax", "4"]);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(lines, ["0 0", "1 0", "2 1", "3 13", "4 41"]);
}

#[test]
fn unknown_family_is_usage_error() {
    let o = sdeinv(&["hilbert", "--family", "riemann"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dims_prints_table() {
    let o = sdeinv(&["dims", "--kmax", "3", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("| dim SDE_k | 7 | 19 | 46 | 94 |"));
    assert!(out.contains("| dim O_k | 7 | 19 | 42 | 70 |"));
    assert!(out.contains("| H(k) | 0 | 0 | 4 | 20 |"));
    assert!(out.contains("PASS counting.free-action.k3"));
}

#[test]
fn dims_above_seven_is_rejected() {
    assert_eq!(sdeinv(&["dims", "--kmax", "8"]).status.code(), Some(2));
}

#[test]
fn germ_round_trip_through_eval() {
    let dir = tempfile::tempdir().unwrap();
    let germ = dir.path().join("g.json");
    let g = germ.to_str().unwrap();
    let o = sdeinv(&["sample-germ", "--order", "3", "--seed", "7", "--out", g]);
    assert!(o.status.success());
    let o = sdeinv(&["invariants", "eval", "--germ", g]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let parsed = JetGerm::from_json(&std::fs::read_to_string(&germ).unwrap()).unwrap();
    for (name, w) in [("K", Which::K), ("I1", Which::I1), ("I4", Which::I4)] {
        let expect = evaluate_invariant(w, &parsed).unwrap().to_string();
        assert_eq!(v["invariants"][name], expect.as_str());
    }
    assert_eq!(v["g_ratios"].as_object().unwrap().len(), 9);
}

#[test]
fn eval_of_missing_file_is_usage_error() {
    let o = sdeinv(&["invariants", "eval", "--germ", "/nonexistent/g.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_group_passes_and_vacuous_run_fails() {
    let o = sdeinv(&["verify", "stabilizer-tensors"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS stabilizer.tensors"));
    let o = sdeinv(&["verify", "symmetries", "--samples", "0", "--max-degree", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL symmetries.tangency"));
    assert_eq!(sdeinv(&["verify", "everything"]).status.code(), Some(2));
}

#[test]
fn config_file_sets_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "seed = 4\nkmax = 2\n[samples]\ntangency = 2\n").unwrap();
    let o = sdeinv_in(&["dims"], Some(&cfg));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("| k | 0 | 1 | 2 |\n"));

    std::fs::write(&cfg, "kmaks = 2\n").unwrap();
    assert_eq!(sdeinv_in(&["dims"], Some(&cfg)).status.code(), Some(2));
}

#[test]
fn report_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let args = |stem: &str| {
        vec![
            "report".to_string(),
            "--samples".into(),
            "2".into(),
            "--max-degree".into(),
            "1".into(),
            "--kmax".into(),
            "3".into(),
            "--out".into(),
            dir.path().join(stem).to_str().unwrap().to_string(),
        ]
    };
    for stem in ["a", "b"] {
        let a = args(stem);
        let o = sdeinv(&a.iter().map(String::as_str).collect::<Vec<_>>());
        assert!(o.status.code().is_some());
    }
    let read = |f: &str| std::fs::read_to_string(dir.path().join(f)).unwrap();
    assert_eq!(read("a.md"), read("b.md"));
    assert_eq!(read("a.json"), read("b.json"));
    let md = read("a.md");
    assert!(md.contains("## Dimension table"));
    assert!(md.contains("- orientation: plus_vanishes"));
    let v: serde_json::Value = serde_json::from_str(&read("a.json")).unwrap();
    assert_eq!(v["i2_reading"], "q_yy");
}
