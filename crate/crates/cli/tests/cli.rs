use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperjacobi"))
        .args(args)
        .env_remove("HYPERJACOBI_REGISTRY")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn registry_file(ids: &[&str]) -> tempfile::NamedTempFile {
    let all: Vec<Value> = serde_json::from_str(&hyperjacobi::catalog::Registry::builtin().to_json()).unwrap();
    let keep: Vec<Value> = all.into_iter().filter(|e| ids.iter().any(|id| e["id"] == *id)).collect();
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), serde_json::to_string(&keep).unwrap()).unwrap();
    f
}

#[test]
fn list_shows_every_entry() {
    let o = run(&["list", "--json"]);
    assert!(o.status.success());
    let rows: Vec<Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows.len(), 17);
    assert!(rows.iter().all(|r| r["id"].is_string() && r["family"].is_string() && r["citation"].is_string()));
    assert!(stdout(&run(&["list"])).contains("t3.2"));
}

#[test]
fn verify_prints_verdict_and_exits_zero() {
    let o = run(&["verify", "tle", "--order", "12", "--samples", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("verdict: proved"));
}

#[test]
fn report_json_fields() {
    let o = run(&["verify", "t2+", "emo2", "--order", "10", "--samples", "1", "--json"]);
    assert!(o.status.success());
    let reports: Vec<Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(reports.len(), 2);
    for r in &reports {
        for key in ["id", "citation", "family", "verdict", "symbolic", "numeric", "constants_checked", "timing"] {
            assert!(!r[key].is_null(), "missing {} in {}", key, r);
        }
        let s = &r["numeric"][0];
        assert!(s["params"].is_object() && s["order"].is_u64() && s["point"].is_string());
    }
    assert_eq!(reports[0]["verdict"], "proved");
    assert_eq!(reports[1]["verdict"], "series_only");
    assert_eq!(reports[1]["symbolic"]["applicable"], false);
}

#[test]
fn seed_reproducible_without_timings() {
    let args = ["verify", "tk", "tg2", "--order", "10", "--samples", "2", "--seed", "5", "--json", "--no-timings"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let reports: Vec<Value> = serde_json::from_slice(&a.stdout).unwrap();
    assert!(reports.iter().all(|r| r.get("timing").is_none()));
    let other = run(&["verify", "tk", "tg2", "--order", "10", "--samples", "2", "--seed", "6", "--json", "--no-timings"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn jobs_do_not_change_output() {
    let base = ["verify-all", "--order", "10", "--samples", "1", "--no-timings", "--json"];
    let one = run(&[&base[..], &["--jobs", "1"]].concat());
    let four = run(&[&base[..], &["--jobs", "4"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn verify_all_summary_line() {
    let f = registry_file(&["tle", "tlp"]);
    let o = run(&["verify-all", "--order", "10", "--samples", "1", "--registry", f.path().to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).trim_end().ends_with("2 formulas: 2 proved, 0 series_only, 0 failed"));
}

#[test]
fn failing_entry_exits_one() {
    let all: Vec<Value> = serde_json::from_str(&hyperjacobi::catalog::Registry::builtin().to_json()).unwrap();
    let mut e = all.into_iter().find(|e| e["id"] == "tle").unwrap();
    e["h"]["factors"][0]["exponent"]["const"] = Value::from("1");
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), Value::Array(vec![e]).to_string()).unwrap();
    let o = run(&["verify", "tle", "--order", "10", "--samples", "1", "--registry", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("verdict: failed"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "nope"][..],
        &["verify", "tle", "--order", "5"],
        &["verify", "tle", "--samples", "0"],
        &["eval", "2f1", "--a", "0.5", "--b", "1", "--c", "1", "--x", "1/2"],
        &["eval", "2f1", "--a", "1", "--b", "1", "--c", "-2", "--x", "1/2"],
        &["eval", "qphi", "--alpha", "1/2", "--beta", "1/3", "--gamma", "1/5", "--q", "3/2", "--x", "1/2"],
        &["verify-all", "--registry", "/nonexistent/registry.json"],
        &["frobnicate"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{:?}", args);
    }
}

#[test]
fn registry_flag_beats_environment() {
    let env_reg = registry_file(&["tle"]);
    let flag_reg = registry_file(&["tlp", "tk"]);
    let list = |flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_hyperjacobi"));
        cmd.args(["list", "--json"]).env("HYPERJACOBI_REGISTRY", env_reg.path());
        if let Some(p) = flag {
            cmd.args(["--registry", p]);
        }
        let rows: Vec<Value> = serde_json::from_slice(&cmd.output().unwrap().stdout).unwrap();
        rows.iter().map(|r| r["id"].as_str().unwrap().to_string()).collect::<Vec<_>>()
    };
    assert_eq!(list(None), ["tle"]);
    assert_eq!(list(Some(flag_reg.path().to_str().unwrap())), ["tlp", "tk"]);
}

#[test]
fn empty_registry_verifies_nothing() {
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), "[]").unwrap();
    let o = run(&["verify-all", "--json", "--registry", f.path().to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(serde_json::from_slice::<Value>(&o.stdout).unwrap(), Value::Array(vec![]));
}

#[test]
fn eval_2f1_exact_and_float() {
    let o = run(&["eval", "2f1", "--a", "0", "--b", "3", "--c", "1/2", "--x", "1/3"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("exact: 1\n"));
    // 2F1(1, 1; 2; x) = -log(1-x)/x
    let o = run(&["eval", "2f1", "--a", "1", "--b", "1", "--c", "2", "--x", "1/10", "--order", "60", "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let f = v["float"].as_f64().unwrap();
    assert!((f - (-(0.9f64).ln() / 0.1)).abs() < 1e-14);
    assert_eq!(v["divergence_warning"], false);
}

#[test]
fn eval_warns_outside_disk() {
    let o = run(&["eval", "2f1", "--a", "1", "--b", "1", "--c", "2", "--x", "2", "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["divergence_warning"], true);
}

#[test]
fn eval_qphi_geometric() {
    // alpha = q, beta = gamma: the series is 1/(1 - x)
    let o = run(&["eval", "qphi", "--alpha", "1/7", "--beta", "1/3", "--gamma", "1/3", "--q", "1/7", "--x", "1/2", "--json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["float"].as_f64().unwrap() - 2.0).abs() < 1e-11);
}

#[test]
fn oracle_agm() {
    let o = run(&["oracle", "agm", "--x", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("M(x) = 1.0000000000000000"));
    let o = run(&["oracle", "agm", "--x", "0.5", "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["residual"].as_f64().unwrap() < 1e-10);
}
