use std::path::Path;
use std::process::Command;

use dgbo_lab::checkpoint::Checkpoint;
use dgbo_lab::criteria::reproducibility_config;

fn dgbo(root: &Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_dgbo"))
        .args(args)
        .env("DGBO_OUTPUT_ROOT", root)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, value: &serde_json::Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, value.to_string()).unwrap();
    path.display().to_string()
}

#[test]
fn run_writes_summary_and_exits_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = serde_json::to_value(reproducibility_config()).unwrap();
    let path = write_config(tmp.path(), "small.json", &cfg);
    let out = dgbo(tmp.path(), &["run", &path]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["passed"], serde_json::json!(true));
    assert!(summary["drift"]["l2_rel"].as_f64().unwrap() < 1e-8);
    assert!(tmp.path().join("run/summary.json").exists());
}

#[test]
fn config_errors_exit_two_and_name_the_field() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = serde_json::to_value(reproducibility_config()).unwrap();
    cfg["window"] = serde_json::json!({"a": 0.5, "c": 1.0});
    let path = write_config(tmp.path(), "bad.json", &cfg);
    let out = dgbo(tmp.path(), &["run", &path]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("window.a") && err.contains("(alpha+1)/(alpha+2)"), "{err}");

    cfg["window"] = serde_json::json!({"a": 0.0, "c": 1.0});
    cfg["extra"] = serde_json::json!(1);
    let path = write_config(tmp.path(), "extra.json", &cfg);
    assert_eq!(dgbo(tmp.path(), &["run", &path]).status.code(), Some(2));

    assert_eq!(dgbo(tmp.path(), &["verify", "nonsense"]).status.code(), Some(2));
}

#[test]
fn unmet_expectation_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = serde_json::to_value(reproducibility_config()).unwrap();
    cfg["expect"] = serde_json::json!({"max_drift": 0.0});
    let path = write_config(tmp.path(), "strict.json", &cfg);
    let out = dgbo(tmp.path(), &["run", &path]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn export_prints_checkpoint_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let ck = Checkpoint {
        length: 4.0,
        alpha: 0.5,
        t: 1.0,
        samples: vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0, 13.0, 14.0, 15.0, 16.0],
    };
    let path = tmp.path().join("s.ckpt");
    ck.write(&path).unwrap();
    let out = dgbo(tmp.path(), &["export", path.to_str().unwrap(), "--csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,u");
    assert_eq!(lines[1], "-2.0,1.0");
    assert_eq!(lines.len(), 17);
    assert_eq!(dgbo(tmp.path(), &["export", "missing.ckpt", "--csv"]).status.code(), Some(1));
}

#[test]
fn reruns_are_bit_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = serde_json::to_value(reproducibility_config()).unwrap();
    let pa = write_config(a.path(), "c.json", &cfg);
    let pb = write_config(b.path(), "c.json", &cfg);
    assert_eq!(dgbo(a.path(), &["run", &pa]).status.code(), Some(0));
    assert_eq!(dgbo(b.path(), &["run", &pb]).status.code(), Some(0));
    for f in ["summary.json", "conserved.csv", "decay.csv", "ledgers.csv", "checkpoints/final.ckpt", "plots/profiles.dat"] {
        let x = std::fs::read(a.path().join("run").join(f)).unwrap();
        let y = std::fs::read(b.path().join("run").join(f)).unwrap();
        assert_eq!(x, y, "{f}");
    }
}
