use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_xxz-mbl"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn error_json(out: &Output) -> serde_json::Value {
    let stderr = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(stderr.trim()).unwrap_or_else(|_| panic!("stderr is not JSON: {stderr}"))
}

fn dir_listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    names
}

#[test]
fn run_writes_outputs_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = run(&["run", "--mode", "pure", "--n", "6", "--t-max", "0.5", "--sample-every", "5", "--realizations", "2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(summary["completed"], 2);
    assert_eq!(
        dir_listing(&out),
        vec!["aggregate.csv", "disorder.jsonl", "manifest.json", "realization_0000_state_00.jsonl", "realization_0001_state_00.jsonl"]
    );
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    fs::write(&cfg, "mode = \"ff_correlation\"\nn = 12\ndelta = 0.0\nh = 1.0\nt_max = 1.0\nrealizations = 3\n").unwrap();
    let out = dir.path().join("ff");
    let o = run(&["run", "--config", cfg.to_str().unwrap(), "--realizations", "2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["realizations"], 2);
    assert_eq!(manifest["config"]["n"], 12);
    assert!(out.join("isolines.csv").exists());
}

#[test]
fn failures_exit_nonzero_with_json() {
    let o = run(&["run", "--n", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error_json(&o)["error"]["kind"], "invalid_argument");

    let o = run(&["run", "--mode", "ed_check", "--n", "14"]);
    assert_eq!(error_json(&o)["error"]["kind"], "too_large");

    let o = run(&["run", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"]["kind"], "usage");

    let o = run(&["preset", "fig99"]);
    assert!(!o.status.success());
    assert!(error_json(&o)["error"]["message"].as_str().unwrap().contains("fig99"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "n = \"ten\"\n").unwrap();
    let o = run(&["run", "--config", bad.to_str().unwrap()]);
    assert_eq!(error_json(&o)["error"]["kind"], "parse");
}

#[test]
fn aggregate_subcommand_averages_and_names_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    fs::write(&a, "t,D\n0,1\n1,2\n").unwrap();
    fs::write(&b, "t,D\n0,3\n1,4\n").unwrap();
    fs::write(&c, "t,D\n0,3\n").unwrap();
    let o = run(&["aggregate", b.to_str().unwrap(), a.to_str().unwrap()]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("t,D_mean,D_stderr,count"));
    assert!(text.lines().nth(1).unwrap().starts_with("0,2.0000000000000000e0,"));

    let o = run(&["aggregate", a.to_str().unwrap(), c.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(error_json(&o)["error"]["message"].as_str().unwrap().contains("c.csv"));
}

#[test]
fn preset_dry_run_prints_configs() {
    let o = run(&["preset", "fig1a-desk", "--dry-run", "--out", "root"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("# fig1a-desk/delta_0"));
    assert!(text.contains("# fig1a-desk/delta_0.5"));
    assert!(text.contains("mode = \"pure\""));
    assert!(text.contains("out = \"root/delta_0.5\""));

    let o = run(&["list"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("fig5-desk") && text.contains("ff_correlation"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut listings = Vec::new();
    for (name, threads) in [("one", "1"), ("two", "2")] {
        let out = dir.path().join(name);
        let o = run(&[
            "run", "--mode", "correlation", "--n", "8", "--t-max", "1", "--sample-every", "5", "--realizations", "3",
            "--seed", "11", "--threads", threads, "--out", out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        listings.push(out);
    }
    let files = dir_listing(&listings[0]);
    assert_eq!(files, dir_listing(&listings[1]));
    for f in files {
        assert_eq!(fs::read(listings[0].join(&f)).unwrap(), fs::read(listings[1].join(&f)).unwrap(), "{f}");
    }
}
