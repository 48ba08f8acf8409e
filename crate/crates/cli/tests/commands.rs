//! End-to-end tests of the `gskit` binary: outputs, exit codes, determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn gskit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gskit")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gskit-cli-test-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn point<'a>(v: &'a Value, name: &str) -> Option<&'a Value> {
    v["equilibria"].as_array().unwrap().iter().find(|p| p["name"] == name)
}

#[test]
fn eq_bt_point_is_exact_and_degenerate() {
    let out = gskit(&["eq", "--k", "1/16", "--F", "1/16"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["mode"], "exact");
    assert_eq!(v["Delta"], "0");
    let p = point(&v, "p_degenerate").expect("degenerate point");
    assert_eq!((p["u"].as_str(), p["v"].as_str()), (Some("1/2"), Some("1/4")));
    assert_eq!(p["class"]["nonhyperbolic"], "bogdanov_takens");
}

#[test]
fn eq_outside_the_fold_has_only_the_trivial_point() {
    let out = gskit(&["eq", "--k", "0.07", "--F", "0.02"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["mode"], "float");
    let pts = v["equilibria"].as_array().unwrap();
    assert_eq!(pts.len(), 1);
    assert_eq!(pts[0]["name"], "p0");
    assert_eq!(pts[0]["stability"]["class"], "stable_node");
}

#[test]
fn eq_bautin_point_has_nonhyperbolic_p_mp() {
    let v = json(&gskit(&["eq", "--k", "9/256", "--F", "3/256"]));
    let p = point(&v, "p_mp").expect("p_mp");
    assert_eq!((p["u"].as_str(), p["v"].as_str()), (Some("1/4"), Some("3/16")));
    assert_eq!(p["trace"], "0");
    assert_eq!(p["class"]["nonhyperbolic"], "hopf_candidate");
    assert_eq!(point(&v, "p_pm").unwrap()["class"], "saddle");
}

#[test]
fn eq_irrational_roots_fall_back_to_floating_point() {
    let v = json(&gskit(&["eq", "--k", "1/50", "--F", "1/50"]));
    assert_eq!(v["mode"], "exact_parameters_irrational_roots");
    assert!(point(&v, "p_mp").unwrap()["u"].is_f64());
}

#[test]
fn domain_and_usage_errors_exit_with_two() {
    assert_eq!(gskit(&["eq", "--k", "-1", "--F", "0.1"]).status.code(), Some(2));
    assert_eq!(gskit(&["eq", "--k", "abc", "--F", "0.1"]).status.code(), Some(2));
    assert_eq!(gskit(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(gskit(&["curves", "--which", "hopf", "--k-range", "0..0.2"]).status.code(), Some(2));
    assert_eq!(gskit(&["repro", "--only", "11"]).status.code(), Some(2));
}

#[test]
fn verify_bt_passes_and_mutation_fails() {
    let out = gskit(&["verify-bt"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["transversality_det"], "-1/512");
    assert_ne!(v["s"], 0);
    let bad = gskit(&["verify-bt", "--mutate"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["passed"], false);
}

#[test]
fn verify_bautin_passes_and_mutation_fails() {
    let out = gskit(&["verify-bautin"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!((v["gh"]["k"].as_str(), v["gh"]["F"].as_str()), (Some("9/256"), Some("3/256")));
    assert_eq!(v["l2_sign"], 1);
    assert!(v["resultant_factorization_sign"].is_i64());
    let bad = gskit(&["verify-bautin", "--mutate"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn closed_form_curves_csv() {
    let out = gskit(&["curves", "--which", "hopf", "--k-range", "0.01..0.0625", "--n", "5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,F");
    assert_eq!(lines.len(), 6);
    let last: Vec<f64> = lines[5].split(',').map(|x| x.parse().unwrap()).collect();
    assert!((last[0] - 0.0625).abs() < 1e-15 && (last[1] - 0.0625).abs() < 1e-12);
    let sn = String::from_utf8(gskit(&["curves", "--which", "sn", "--n", "3"]).stdout).unwrap();
    assert!(sn.starts_with("k,F,branch\n"));
    assert_eq!(sn.lines().count(), 7);
}

#[test]
fn hopf_continuation_runs_from_k_zero_to_bt() {
    let out = gskit(&["continue", "--curve", "hopf"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,F,u,v,t0,t1,t2,t3,flags"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    let first_k: f64 = rows[0][0].parse().unwrap();
    let last = rows.last().unwrap();
    assert!(first_k < 1e-3, "first k = {first_k}");
    assert_eq!(last[8], "BT");
    assert!((last[0].parse::<f64>().unwrap() - 0.0625).abs() < 1e-8);
    assert_eq!(rows.iter().filter(|r| r[8] == "GH").count(), 1);
}

#[test]
fn continuation_json_has_schema() {
    let v = json(&gskit(&["continue", "--curve", "fold", "--format", "json"]));
    assert_eq!(v["schema"], 1);
    assert_eq!(v["curve"], "fold");
    assert!(v["points"].as_array().unwrap().len() > 100);
}

#[test]
fn homoclinic_brackets_are_tight() {
    let out = gskit(&["continue", "--curve", "homoclinic", "--k-range", "0.058..0.06", "--n", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<f64>> = text.lines().skip(1).map(|l| l.split(',').filter(|c| !c.is_empty()).map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    for r in rows {
        assert!(r[3] - r[2] <= 1e-8);
        assert!(r[2] <= r[1] && r[1] <= r[3]);
    }
}

#[test]
fn cycles_reports_two_cycles_in_region_three() {
    let v = json(&gskit(&["cycles", "--k", "0.032", "--F", "0.0097285"]));
    assert_eq!(v["schema"], 1);
    assert_eq!(v["census"]["cycles"].as_array().unwrap().len(), 2);
    assert_eq!(v["region"]["id"], "3");
}

#[test]
fn portrait_files_are_written_and_deterministic() {
    let (a, b) = (scratch_dir("portrait-a"), scratch_dir("portrait-b"));
    for dir in [&a, &b] {
        let out = gskit(&["portrait", "--k", "0.05", "--F", "0.03", "--seeds", "4", "--out", dir.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    for name in ["portrait.svg", "portrait.csv", "portrait.json"] {
        let x = std::fs::read(a.join(name)).unwrap();
        let y = std::fs::read(b.join(name)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, y, "{name} differs between runs");
    }
    let svg = std::fs::read_to_string(a.join("portrait.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    let _ = std::fs::remove_dir_all(&a);
    let _ = std::fs::remove_dir_all(&b);
}

#[test]
fn small_map_matches_the_signature_table_and_is_thread_independent() {
    let dir = scratch_dir("map");
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_gskit"))
            .args(["map", "--grid", "24x24", "--k", "0..0.07", "--F", "0..0.07", "--out", dir.to_str().unwrap()])
            .env("GSKIT_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let two = run("2");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, two.stdout);
    let csv = String::from_utf8(one.stdout).unwrap();
    assert!(csv.starts_with("k,F,region\n"));
    assert_eq!(csv.lines().count(), 1 + 24 * 24);
    let adj: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("adjacency.json")).unwrap()).unwrap();
    assert_eq!(adj["schema"], 1);
    assert_eq!(adj["matches_expected"], true);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = scratch_dir("config");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.conf");
    std::fs::write(&cfg, "# small grid\ngrid = 3x2\nk_range = 0.02..0.03\nf_range = 0.005..0.01\nformat = json\n").unwrap();
    let out = gskit(&["--config", cfg.to_str().unwrap(), "map"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1 + 3 * 2);
    let out = gskit(&["--config", cfg.to_str().unwrap(), "map", "--grid", "2x2"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1 + 2 * 2);
    let v = json(&gskit(&["--config", cfg.to_str().unwrap(), "continue", "--curve", "hopf"]));
    assert_eq!(v["schema"], 1);
    std::fs::write(&cfg, "grid = banana\n").unwrap();
    assert_eq!(gskit(&["--config", cfg.to_str().unwrap(), "map"]).status.code(), Some(2));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn repro_single_criterion_table() {
    let out = gskit(&["repro", "--only", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("criterion  3 PASS"));
    assert!(text.contains("1/1 criteria passed"));
    let fail = gskit(&["repro", "--only", "1"]);
    assert_eq!(fail.status.code(), Some(1));
}
