use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn batch(dir: &tempfile::TempDir, config: &str) -> (Output, String) {
    let cfg = dir.path().join("grid.toml");
    let out = dir.path().join("out.jsonl");
    fs::write(&cfg, config).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_cover-switch"))
        .env_remove("COVER_SWITCH_JOBS")
        .args(["batch", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .output()
        .expect("binary runs");
    let body = fs::read_to_string(&out).unwrap_or_default();
    (o, body)
}

fn reports(body: &str) -> Vec<Value> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas/report.schema.json");
    let schema: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    let v = jsonschema::validator_for(&schema).unwrap();
    body.lines()
        .map(|l| {
            let r: Value = serde_json::from_str(l).unwrap();
            assert!(v.is_valid(&r), "{r}");
            r
        })
        .collect()
}

#[test]
fn empty_grid_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let (o, body) = batch(&dir, "runs = []\n");
    assert_eq!(o.status.code(), Some(0));
    assert!(body.is_empty());
    assert!(dir.path().join("out.jsonl").exists());
}

#[test]
fn passing_grid_writes_one_line_per_run() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"
runs = ["verify-stable --samples 10 --seed 3"]

[[grid]]
command = "verify-main"
n = [2, 3]
t = [3, 4]
N = [5, 6]
"#;
    let (o, body) = batch(&dir, config);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rs = reports(&body);
    assert_eq!(rs.len(), 9);
    assert!(rs.iter().all(|r| r["pass"] == true));
    assert_eq!(rs[0]["command"], "verify-stable");
    assert_eq!(rs[1]["params"], serde_json::json!({"N": 5, "n": 2, "t": 3}));
}

#[test]
fn injected_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"
runs = [
  "verify-main --n 3 --t 3 --N 6",
  "verify-main --n 3 --t 3 --N 6 --bound-shift 1",
]
"#;
    let (o, body) = batch(&dir, config);
    assert_eq!(o.status.code(), Some(1));
    let rs = reports(&body);
    assert_eq!(rs.len(), 2);
    assert_eq!(rs[0]["pass"], true);
    assert_eq!(rs[1]["pass"], false);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for config in [
        "runs = [",
        "unknown = 1",
        "runs = [\"deficit --n 3 --q 2 --r 2\"]",
        "runs = [\"verify-main --n 3\"]",
        "runs = [\"verify-main --n 3 --t 3 --N 6 --format json\"]",
        "[[grid]]\nn = [3]",
    ] {
        let (o, _) = batch(&dir, config);
        assert_eq!(o.status.code(), Some(2), "{config}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"), "{config}");
    }
}
