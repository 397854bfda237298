use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

use wdg::runner;
use wdg_core::montecarlo::{clt_experiment, Statistic};

fn wdg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wdg")).args(args).output().expect("run wdg")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn verify_pairings_succeeds() {
    let out = wdg(&["verify", "--model", "pairings", "--n", "3", "--rmax", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["schema"], "wdg/1");
    assert_eq!(v["model"], "pairings");
    assert_eq!(v["orders"].as_array().unwrap().len(), 3);
    let float = wdg(&["verify", "--model", "pairings", "--n", "3", "--rmax", "2", "--numeric", "float", "--form", "components"]);
    assert_eq!(float.status.code(), Some(0));
}

#[test]
fn verify_other_models() {
    let dir = tempfile::tempdir().unwrap();
    let chain = write(
        dir.path(),
        "chain.json",
        &json!({"schema": "wdg/1", "states": ["a", "b"], "P": [["7/10", "3/10"], ["1/5", "4/5"]]}),
    );
    let ssep = write(
        dir.path(),
        "ssep.json",
        &json!({"schema": "wdg/1", "alpha": "1", "beta": "1/3", "gamma": "1/2", "delta": "2", "N": 6}),
    );
    let report = dir.path().join("fit.json");
    for args in [
        vec!["verify", "--model", "gnm", "--n", "4", "--m", "3"],
        vec!["verify", "--model", "perm", "--n", "4", "--scan", "sampled:200", "--seed", "3"],
        vec!["verify", "--model", "ssep", "--config", &ssep],
        vec!["verify", "--model", "markov", "--chain", &chain, "--n", "3"],
        vec!["verify", "--model", "ssep", "--alpha", "1", "--beta", "1/3", "--gamma", "1/2", "--delta", "2", "--n", "5", "--out", report.to_str().unwrap()],
    ] {
        let out = wdg(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(saved["model"], "ssep");
}

#[test]
fn cumulant_command() {
    let out = wdg(&["cumulant", "--model", "pairings", "--n", "2", "--indices", "1-2,1-2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["value"], "2/9");
    let out = wdg(&["cumulant", "--model", "perm", "--n", "3", "--indices", "1:1"]);
    assert_eq!(stdout_json(&out)["value"], "1/3");
    let out = wdg(&["cumulant", "--model", "markov", "--indices", "0:a,1:b"]);
    assert_eq!(out.status.code(), Some(0));
    let out = wdg(&["cumulant", "--model", "pairings", "--n", "2", "--indices", "1_2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "usage");
}

#[test]
fn mwst_command() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(
        dir.path(),
        "g.json",
        &json!({"schema": "wdg/1", "vertices": ["x", "y", "z"], "edges": [["x", "y", "1/2"], ["y", "z", "1/5"], ["x", "z", "1/20"]]}),
    );
    let out = wdg(&["mwst", "--graph", &g, "--bruteforce"]);
    let v = stdout_json(&out);
    assert_eq!(v["value"], "1/10");
    assert_eq!(v["bruteforce"], "1/10");
    let f = write(dir.path(), "f.json", &json!({"schema": "wdg/1", "vertices": [0, 1], "edges": [[0, 1, 0.25]]}));
    let v = stdout_json(&wdg(&["mwst", "--graph", &f]));
    assert_eq!(v["value"], 0.25);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let out = wdg(&["mwst", "--graph", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "format");
}

#[test]
fn variance_and_scqf_commands() {
    let v = stdout_json(&wdg(&["variance", "--model", "pairings", "--n", "4"]));
    assert_eq!(v["variance"], "28/15");
    assert_eq!(v["matches_closed_form"], true);
    let b = stdout_json(&wdg(&["variance", "--model", "pairings", "--n", "4", "--mode", "bruteforce"]));
    assert_eq!(b["variance"], "28/15");
    let g = stdout_json(&wdg(&["variance", "--model", "gnm", "--n", "5", "--m", "4", "--mode", "exhaustive"]));
    assert!(g["exact"].is_string());
    let out = wdg(&["scqf", "--factorial", "--X", "100,1000", "--a", "1,2,3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(wdg(&["scqf", "--X", "100", "--a", "1"]).status.code(), Some(2));
}

#[test]
fn criterion_command() {
    let dir = tempfile::tempdir().unwrap();
    let rows: Vec<Value> = [10.0, 20.0, 40.0].iter().map(|&n| json!({"n": n, "r": 5.0, "q": 2.0, "sigma": 3.0})).collect();
    let s = write(dir.path(), "s.json", &json!({"schema": "wdg/1", "rows": rows}));
    let v = stdout_json(&wdg(&["criterion", "--series", &s, "--s", "3"]));
    assert_eq!(v["trend"], json!([false]));
    let bad = write(dir.path(), "b.json", &json!({"schema": "wdg/1", "rows": [{"n": 1.0, "r": 1.0, "q": 1.0, "sigma": 0.0}, {"n": 2.0, "r": 1.0, "q": 1.0, "sigma": 1.0}]}));
    assert_eq!(wdg(&["criterion", "--series", &bad]).status.code(), Some(2));
}

#[test]
fn clt_command_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("run");
    let out = wdg(&[
        "--workers", "2", "clt", "--model", "pairings", "--statistic", "crossings", "--grid", "10,20", "--samples", "300",
        "--seed", "5", "--out", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert!(out_dir.join("report.json").exists());
    let csv = std::fs::read_to_string(out_dir.join("histograms.csv")).unwrap();
    assert!(csv.lines().count() > 64);
    let again = wdg(&["--workers", "1", "clt", "--model", "pairings", "--statistic", "crossings", "--grid", "10,20", "--samples", "300", "--seed", "5"]);
    assert_eq!(stdout_json(&again), v);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["verify"],
        vec!["verify", "--model", "pairings"],
        vec!["verify", "--model", "pairings", "--n", "2", "--scan", "bogus"],
        vec!["verify", "--model", "pairings", "--n", "2", "--family", "nope"],
        vec!["clt", "--model", "pairings", "--statistic", "nope", "--grid", "10,20"],
        vec!["--workers", "0", "clt", "--model", "pairings", "--statistic", "crossings", "--grid", "10,20"],
        vec!["frobnicate"],
    ] {
        let out = wdg(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(stderr_json(&out)["schema"], "wdg/1");
    }
    assert_eq!(wdg(&["--help"]).status.code(), Some(0));
}

#[test]
fn runner_is_worker_independent() {
    for (model, stat, grid) in [("pairings", "crossings", [12, 24]), ("ssep", "particles", [6, 8]), ("markov", "pattern", [20, 40])] {
        let s = Statistic::lookup(model, stat).unwrap();
        let seq = clt_experiment(&s, &grid, 150, 77).unwrap();
        for w in [1, 3] {
            let pool = runner::pool(Some(w)).unwrap();
            assert_eq!(runner::clt_experiment(&pool, &s, &grid, 150, 77).unwrap(), seq, "{model} with {w} workers");
        }
    }
}
