use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn loopvir(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loopvir"))
        .args(args)
        .env_remove("LOOPVIR_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("loopvir-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn kac_roots_at_kappa_three() {
    let out = loopvir(&["kac", "--level", "2", "--kappa", "3/1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["schema_version"], 1);
    let mut roots: Vec<&str> = v["data"]["roots"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["value"].as_str().unwrap())
        .collect();
    roots.sort();
    assert_eq!(roots, ["0/1", "1/16", "1/2"]);
    assert_eq!(v["data"]["central_charge"], "1/2");
}

#[test]
fn reflection_at_zero_weight() {
    let out = loopvir(&["reflection", "--kappa", "8/3", "--lambda", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["data"]["re"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((v["data"]["smallest_pole"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-9);
}

#[test]
fn exit_codes() {
    assert_eq!(loopvir(&["bogus"]).status.code(), Some(2));
    assert_eq!(loopvir(&["kac", "--kappa", "x/y"]).status.code(), Some(2));
    assert_eq!(loopvir(&["kac", "--kappa", "-2"]).status.code(), Some(2));
    assert_eq!(
        loopvir(&["bubble-limit", "--q", "1.5"]).status.code(),
        Some(2)
    );
    // a tolerance no float computation meets fails the checks, not the run
    let out = loopvir(&["bubble-limit", "--tolerance", "1e-12"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["status"], "fail");
    assert_eq!(loopvir(&["bubble-limit"]).status.code(), Some(0));
}

#[test]
fn small_sweep_and_operator_suites_pass() {
    let out = loopvir(&["verify-commutators", "--max-mode", "2", "--max-degree", "3"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let out = loopvir(&["gram", "--level", "2", "--lambda", "1/3", "--kappa", "3"]);
    assert_eq!(out.status.code(), Some(0));
    // singular but on the Kac table
    let out = loopvir(&["gram", "--level", "2", "--lambda", "1/2", "--kappa", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let out = loopvir(&["singular", "--kappa", "3"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn text_format_and_output_file() {
    let d = scratch("out");
    let p = d.join("r.txt");
    let out = loopvir(&["kac", "--format", "text", "--output", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let body = std::fs::read_to_string(&p).unwrap();
    assert!(body.starts_with("suite kac"));
    assert!(body.trim_end().ends_with("status: pass"));
    std::fs::remove_dir_all(d).unwrap();
}

#[test]
fn reports_are_deterministic() {
    let args = [
        "loewner-demo",
        "--runs",
        "200",
        "--dt",
        "1e-2",
        "--seed",
        "7",
    ];
    let a = loopvir(&args);
    let b = loopvir(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["parameters"]["seed"], 7);
}

#[test]
fn config_file_env_and_flags() {
    let d = scratch("cfg");
    let cfg = d.join("run.toml");
    std::fs::write(
        &cfg,
        "kappa = \"4\"\nlevel = 2\nformat = \"json\"\ntolerance = 1e-3\n",
    )
    .unwrap();
    let c = cfg.to_str().unwrap();
    let v = json(&loopvir(&["kac", "--config", c]));
    assert_eq!(v["data"]["central_charge"], "1/1");
    let v = json(&loopvir(&["kac", "--config", c, "--kappa", "2"]));
    assert_eq!(v["data"]["central_charge"], "-2/1");

    std::fs::write(&cfg, "kapa = \"4\"\n").unwrap();
    assert_eq!(loopvir(&["kac", "--config", c]).status.code(), Some(2));
    std::fs::write(&cfg, "level = \"two\"\n").unwrap();
    assert_eq!(loopvir(&["kac", "--config", c]).status.code(), Some(2));
    let missing = d.join("missing.toml");
    assert_eq!(
        loopvir(&["kac", "--config", missing.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    let cache = d.join("env-cache");
    let out = Command::new(env!("CARGO_BIN_EXE_loopvir"))
        .args(["cache", "warm", "--max-mode", "1", "--max-index", "3"])
        .env("LOOPVIR_CACHE_DIR", &cache)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 3);
    std::fs::remove_dir_all(d).unwrap();
}

#[test]
fn cache_warm_stat_clear() {
    let d = scratch("cache");
    let dir = d.join("ops");
    let ds = dir.to_str().unwrap();
    let warm = |extra: &str| {
        loopvir(&[
            "cache",
            "warm",
            "--cache-dir",
            ds,
            "--max-mode",
            "3",
            "--max-index",
            "4",
            "--extra-order",
            extra,
        ])
    };
    let out = warm("0");
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );

    let v = json(&loopvir(&["cache", "stat", "--cache-dir", ds]));
    let listed = v["data"].as_array().unwrap();
    assert_eq!(listed.len(), 7);
    assert!(listed.iter().all(|e| e.get("error").is_none()));

    // a different series order must reproduce the cached coefficients
    let out = warm("4");
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let matches = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["name"].as_str().unwrap().contains("matches cached"))
        .count();
    assert_eq!(matches, 7);

    // corrupt one entry: stat flags it, a cached run warns and rebuilds it
    let victim = std::fs::read_dir(&dir)
        .unwrap()
        .next()
        .unwrap()
        .unwrap()
        .path();
    std::fs::write(&victim, b"LVOP\x01broken").unwrap();
    let out = loopvir(&["cache", "stat", "--cache-dir", ds]);
    assert_eq!(out.status.code(), Some(1));
    let out = loopvir(&["gram", "--level", "2", "--lambda", "1/3", "--cache-dir", ds]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("corrupt cache entry"));
    assert_eq!(
        loopvir(&["cache", "stat", "--cache-dir", ds]).status.code(),
        Some(0)
    );

    let v = json(&loopvir(&["cache", "clear", "--cache-dir", ds]));
    assert_eq!(v["status"], "pass");
    let v = json(&loopvir(&["cache", "stat", "--cache-dir", ds]));
    assert!(v["data"].as_array().unwrap().is_empty());
    std::fs::remove_dir_all(d).unwrap();
}
