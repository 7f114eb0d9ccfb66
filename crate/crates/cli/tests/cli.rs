use std::path::Path;
use std::process::{Command, Output};

fn lewislab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lewislab"))
        .args(args)
        .env_remove("LEWISLAB_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn dim_examples() {
    let o = lewislab(&["dim", "--group", "gamma:2", "--n", "8", "--lambda", "minus", "--system", "reduced"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "6\n");
    let o = lewislab(&["dim", "--group", "gamma0:7", "--n", "10", "--lambda", "both"]);
    assert_eq!(stdout(&o), "16\n");
    let o = lewislab(&["dim", "--group", "gamma:2", "--n", "6", "--system", "gamma2_pair", "--lambda", "plus"]);
    assert_eq!(stdout(&o), "2\n");
    let o = lewislab(&["dim", "--group", "gamma0:2", "--n", "6", "--system", "gamma02_tilde"]);
    assert_eq!(stdout(&o), "5\n");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["dim", "--group", "gamma:3", "--n", "3"][..],
        &["dim", "--group", "gamma:1", "--n", "4"],
        &["dim", "--group", "gamma:3", "--n", "4", "--system", "reduced"],
        &["dim", "--group", "gamma:3", "--n", "4", "--system", "gamma2_pair"],
        &["table", "--family", "gamma", "--N", "3", "--n", "5"],
        &["table", "--family", "gamma", "--N", "3", "--n", "2", "--system", "master"],
        &["eichler", "--family", "gamma0", "--N", "5", "--k", "3"],
        &["dump-system", "--group", "gamma:2", "--n", "4", "--lambda", "both"],
        &["frobnicate"],
    ] {
        assert_eq!(lewislab(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn dim_json_record() {
    let o = lewislab(&["dim", "--group", "gamma:3", "--n", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["family"], "gamma");
    assert_eq!(v["N"], 3);
    assert_eq!(v["dim_total"], 6);
    assert_eq!(v["predicted"], 6);
    assert_eq!(v["match"], true);
    assert_eq!(v["system"], "extended");
    assert!(v.get("elapsed_ms").is_none());
    let o = lewislab(&["dim", "--group", "gamma:3", "--n", "2", "--format", "json", "--timings"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["elapsed_ms"].is_u64());
}

#[test]
fn table_grid_and_empty_range() {
    let o = lewislab(&["table", "--family", "gamma0", "--N", "3,5", "--n", "2..12"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("| 3 | 2 | 4 | 4 | 6 | 8 | 8 |"), "{text}");
    assert!(text.contains("| 5 | 4 | 4 | 8 | 8 | 12 | 12 |"), "{text}");
    let o = lewislab(&["table", "--family", "gamma", "--N", "3", "--n", "14..12"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "");
}

#[test]
fn table_is_deterministic_across_job_counts() {
    let args = ["table", "--family", "gamma0", "--N", "3..7", "--n", "2..8", "--format", "json"];
    let a = lewislab(&[&args[..], &["--jobs", "1"]].concat());
    let b = lewislab(&[&args[..], &["--jobs", "3"]].concat());
    assert_eq!(a.stdout, b.stdout);
    let records: Vec<serde_json::Value> = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(records.len(), 5 * 4);
    // level 4 and 6 are not prime but still computed
    assert!(records.iter().all(|r| r["match"] == true));
}

#[test]
fn csv_is_projection_of_json() {
    let json = lewislab(&["table", "--family", "gamma", "--N", "4", "--n", "2,4", "--format", "json"]);
    let csv = lewislab(&["table", "--family", "gamma", "--N", "4", "--n", "2,4", "--format", "csv"]);
    let records: Vec<serde_json::Value> = serde_json::from_slice(&json.stdout).unwrap();
    let text = stdout(&csv);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    for (line, rec) in lines.zip(&records) {
        for (name, field) in header.iter().zip(line.split(',')) {
            let want = match &rec[*name] {
                serde_json::Value::Null => String::new(),
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            assert_eq!(field, want, "column {name}");
        }
    }
}

#[test]
fn check_flags_annotated_cell() {
    let o = lewislab(&["check", "--family", "gamma", "--N", "3", "--n", "10,12"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("Γ(3) n=12: computed 26"), "{text}");
    assert!(text.contains("printed 24"), "{text}");
    assert!(text.contains("discrepancy (suspected typo)"), "{text}");
    let o = lewislab(&["check", "--family", "gamma", "--N", "4", "--n", "2..12", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let records: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
    for r in records {
        let n = r["n"].as_u64().unwrap();
        assert_eq!(r["predicted"].as_u64().unwrap(), 4 * (n + 1));
    }
}

#[test]
fn check_reports_failures_with_exit_1() {
    // the reduced system does not exist for Γ(3); every cell fails
    let o = lewislab(&["check", "--family", "gamma", "--N", "2,3", "--n", "2", "--system", "reduced"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("ERROR"));
    let o = lewislab(&["table", "--family", "gamma", "--N", "2,3", "--n", "2", "--system", "reduced"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("| 3 | ERR |"));
}

fn cache_files(dir: &Path) -> usize {
    std::fs::read_dir(dir).unwrap().count()
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["table", "--family", "gamma0", "--N", "5,7", "--n", "2..6", "--format", "json"];
    let plain = lewislab(&args);
    let cold = lewislab(&[&args[..], &["--cache", cache]].concat());
    assert_eq!(cache_files(dir.path()), 2 * 3 * 2);
    let warm = lewislab(&[&args[..], &["--cache", cache]].concat());
    assert_eq!(plain.stdout, cold.stdout);
    assert_eq!(plain.stdout, warm.stdout);

    let env_dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_lewislab"))
        .args(["dim", "--group", "gamma:2", "--n", "4"])
        .env("LEWISLAB_CACHE", env_dir.path())
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "5\n");
    assert_eq!(cache_files(env_dir.path()), 2);
}

#[test]
fn eichler_and_upsilon() {
    let o = lewislab(&["upsilon", "--k", "2..10"]);
    assert_eq!(stdout(&o), "k=2 2\nk=4 2\nk=6 4\nk=8 4\nk=10 6\n");
    let o = lewislab(&["eichler", "--family", "gamma", "--N", "2", "--k", "2..6"]);
    assert_eq!(stdout(&o), "gamma:2 k=2 3\ngamma:2 k=4 5\ngamma:2 k=6 7\n");
    let o = lewislab(&["eichler", "--family", "gamma0", "--N", "13", "--k", "12", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["dim_eichler"], 28);
}

#[test]
fn dump_system_text_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.txt");
    let o = lewislab(&[
        "dump-system", "--group", "gamma:2", "--n", "4", "--lambda", "minus", "--output",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("60 30"));
    assert_eq!(lines.clone().count(), 60);
    assert!(lines.all(|l| l.split(' ').count() == 30));
    let o = lewislab(&["dump-system", "--group", "gamma:2", "--n", "4", "--lambda", "minus"]);
    assert_eq!(stdout(&o), text);
}
