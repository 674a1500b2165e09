use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn defectwb(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_defectwb"));
    cmd.args(args).env_remove("DEFECTWB_EPS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

const GOOD: &str = r#"
[[scenario]]
name = "monopole-charge"
check = "monopole"
params = { charge = 1, grid = 64 }
golden = [{ pointer = "/charge/estimate", value = 1.0, tol = 1e-6 }]

[[scenario]]
name = "wilson"
check = "wilson"
params = { weight = 3 }
"#;

#[test]
fn version_names_the_schema() {
    let out = defectwb(&["--version"], &[]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(env!("CARGO_PKG_VERSION")) && text.contains("schema 1"), "{text}");
}

#[test]
fn passing_suite_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.toml", GOOD);
    let json = dir.path().join("out.json");
    let out = defectwb(&["suite", dir.path().to_str().unwrap(), "--jobs", "2", "--json", json.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&fs::read(json).unwrap()).unwrap();
    assert_eq!(report["summary"]["total"], 2);
    assert_eq!(report["schema"], 1);
}

#[test]
fn injected_counterexample_fails_the_suite() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.toml", GOOD);
    write(
        dir.path(),
        "b.json",
        r#"{"scenario": [{"name": "flipped", "check": "fact_line", "params": {"convention": "flipped"}}]}"#,
    );
    let out = defectwb(&["suite", dir.path().to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["summary"]["failures"], serde_json::json!(["flipped"]));
    assert_eq!(report["summary"]["failed"], 1);
}

#[test]
fn config_errors_exit_two() {
    let dup = tempfile::tempdir().unwrap();
    write(dup.path(), "a.toml", GOOD);
    write(dup.path(), "b.toml", GOOD);
    let out = defectwb(&["suite", dup.path().to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate"));

    let empty = tempfile::tempdir().unwrap();
    assert_eq!(defectwb(&["suite", empty.path().to_str().unwrap()], &[]).status.code(), Some(2));

    let typo = tempfile::tempdir().unwrap();
    write(typo.path(), "t.toml", "[[scenario]]\nname = \"s\"\ncheck = \"scalar_defect\"\nparams = { radiius = 1 }\n");
    let out = defectwb(&["run", typo.path().join("t.toml").to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("radiius"));

    assert_eq!(defectwb(&["wilson"], &[("DEFECTWB_EPS", "tiny")]).status.code(), Some(2));
    assert_eq!(defectwb(&["bf-lagrangians", "--sweep-s", "2..-2:1"], &[]).status.code(), Some(2));
    assert_eq!(defectwb(&["ym", "--cutoff", "0"], &[]).status.code(), Some(1));
}

#[test]
fn subcommands_emit_reports_and_tables() {
    let out = defectwb(&["monopole", "--charge", "3", "--grid", "64"], &[]);
    assert!(out.status.success());
    let r: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((r["payload"]["charge"]["estimate"].as_f64().unwrap() - 3.0).abs() < 1e-6);

    let out = defectwb(&["collapse", "--t", "0.25", "--rows", "13"], &[]);
    let csv = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 14);
    assert_eq!(rows[0], "s,f");
    assert_eq!(rows[1], "0,0");
    assert_eq!(rows[13], "3,3");

    let out = defectwb(&["fact-line", "--flipped"], &[]);
    assert_eq!(out.status.code(), Some(1));

    let out = defectwb(&["bf-lagrangians", "--sweep-s", "-2..2:0.5"], &[]);
    assert!(out.status.success());
    let r: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["payload"]["lagrangians"].as_array().unwrap().len(), 9 + 4);

    let out = defectwb(&["scalar-defect", "--modes", "2", "--order", "4", "--csv"], &[]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("k,row,col,value\n"));

    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "seg.json", r#"{"segments": [[[1.0, 0.0, 0.0], 0.5], [[0.0, 1.0, 0.0], 0.5]]}"#);
    let out = defectwb(&["monodromy", "--segments", dir.path().join("seg.json").to_str().unwrap()], &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
