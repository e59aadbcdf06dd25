use std::path::Path;
use std::process::{Command, Output};

fn freecoarse(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freecoarse"))
        .args(args)
        .env("FREECOARSE_OUT", out)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn list_suites_names_all_ten() {
    let dir = tempfile::tempdir().unwrap();
    let o = freecoarse(dir.path(), &["list-suites"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 10);
    assert!(text.contains("remark3-growth"));
}

#[test]
fn run_writes_report_and_tables() {
    let dir = tempfile::tempdir().unwrap();
    let o = freecoarse(dir.path(), &["run", "lemma2-restriction"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let suite = dir.path().join("lemma2-restriction");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(suite.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["suite"], "lemma2-restriction");
    for check in report["checks"].as_array().unwrap() {
        assert_eq!(check["status"], "pass");
        assert!(check["range"].as_str().unwrap().contains("exhaustive"));
    }
    let csv = std::fs::read_to_string(suite.join("norms.csv")).unwrap();
    assert!(csv.starts_with("element,r,n_lo,n_hi,method\n"));
    assert!(suite.join("timing.json").exists());
}

#[test]
fn growth_suite_reports_norms_one_to_five() {
    let dir = tempfile::tempdir().unwrap();
    let o = freecoarse(dir.path(), &["run", "remark3-growth"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("remark3-growth/growth.csv")).unwrap();
    let mut rows = csv::Reader::from_reader(csv.as_bytes());
    let headers = rows.headers().unwrap().clone();
    let m = headers.iter().position(|h| h == "m").unwrap();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let (oracle, tjoin) = (col("max_norm_oracle"), col("max_norm_tjoin"));
    let got: Vec<[String; 3]> = rows
        .records()
        .map(|r| r.unwrap())
        .map(|r| [r[m].to_owned(), r[oracle].to_owned(), r[tjoin].to_owned()])
        .collect();
    let want: Vec<[String; 3]> = (1..=5).map(|k: usize| [k.to_string(), k.to_string(), k.to_string()]).collect();
    assert_eq!(got, want);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(freecoarse(dir.path(), &["run", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(freecoarse(dir.path(), &["run", "sandwich-bounds"]).status.code(), Some(2));
    assert_eq!(freecoarse(dir.path(), &["--p", "4", "run", "lemma2-restriction"]).status.code(), Some(2));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"space\": {\"kind\": \"path\", \"n\": 4},\n  \"colour\": 3\n}").unwrap();
    let o = freecoarse(dir.path(), &["--config", bad.to_str().unwrap(), "run", "lemma2-restriction"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn norm_queries_print_results() {
    let dir = tempfile::tempdir().unwrap();
    let o = freecoarse(dir.path(), &["norm", "--element", "x0+x2", "--r", "1"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], serde_json::json!({"kind": "exact", "n": 2}));
    assert_eq!(v["method"], "tjoin");

    let o = freecoarse(dir.path(), &["norm", "--word", "e"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], serde_json::json!({"kind": "exact", "n": 0}));

    let o = freecoarse(dir.path(), &["--max-grade", "1", "norm", "--word", "x0 x7"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"]["kind"], "not-within-limits");
    assert!(String::from_utf8_lossy(&o.stderr).contains("max_grade = 1"));

    let o = freecoarse(dir.path(), &["norm", "--element", "x0+x99"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 3"));
}

#[test]
fn balls_are_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let o = freecoarse(dir.path(), &["--path", "5", "balls", "--radii", "1", "--max-n", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let counts: Vec<usize> =
        text.lines().skip(1).map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect();
    assert_eq!(counts[0], 2, "identity and z at n = 0");
    assert!(counts.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(*counts.last().unwrap(), 32);
}

#[test]
fn seeded_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["--seed", "5", "--path", "5", "--samples", "10", "run", "sandwich-bounds"];
    assert!(freecoarse(a.path(), &args).status.success());
    assert!(freecoarse(b.path(), &args).status.success());
    let read = |d: &Path| std::fs::read(d.join("sandwich-bounds/report.json")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}

#[test]
fn check_map_on_an_inclusion() {
    let dir = tempfile::tempdir().unwrap();
    let o = freecoarse(dir.path(), &["--path", "4", "--target-points", "3", "check-map", "x0", "x1", "x2", "x2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(dir.path().join("check-map/universal.csv").exists());
    let o = freecoarse(dir.path(), &["--path", "4", "--target-points", "3", "check-map", "x0"]);
    assert_eq!(o.status.code(), Some(2));
}
