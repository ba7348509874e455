use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use attractorlab::fixtures::{self, PLOT_CASES};
use attractorlab::formats::fnv1a;
use attractorlab::scenario::{shipped, Scenario, CORPUS};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_attractorlab")).args(args).output().unwrap()
}

fn scenario_path(id: &str) -> String {
    format!("{}/scenarios/{id}.json", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("attractorlab-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&["detect", "--scenario", &scenario_path("example3")]).status.code(), Some(0));
    assert_eq!(bin(&["certify", "--scenario", &scenario_path("example1")]).status.code(), Some(1));
    assert_eq!(bin(&["detect", "--scenario", &scenario_path("identity")]).status.code(), Some(1));
    assert_eq!(bin(&["detect", "--scenario", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(bin(&["example", "7"]).status.code(), Some(2));
    assert_eq!(bin(&["orbit", "--scenario", &scenario_path("example2")]).status.code(), Some(3));
}

#[test]
fn malformed_scenario_names_the_key() {
    let dir = scratch("malformed");
    let text = shipped("example3").unwrap().to_canonical_json().replace("\"epsilon\": 0.05", "\"epsilon\": \"x\"");
    assert!(text.contains("\"epsilon\": \"x\""));
    let path = dir.join("bad.json");
    std::fs::write(&path, text).unwrap();
    let out = bin(&["detect", "--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("params.epsilon"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn scenario_files_round_trip_byte_for_byte() {
    for (id, text) in CORPUS {
        let parsed = Scenario::parse(text).unwrap();
        assert_eq!(parsed.to_canonical_json(), text, "{id}");
        let on_disk = std::fs::read_to_string(scenario_path(id)).unwrap();
        assert_eq!(on_disk, text, "{id}");
    }
}

fn csv_rows(out: &Output) -> usize {
    stdout(out).lines().count() - 1
}

#[test]
fn orbit_row_counts() {
    let ex1 = bin(&["orbit", "--scenario", &scenario_path("example1"), "--base", "1,1", "--max-len", "2"]);
    assert_eq!(ex1.status.code(), Some(0));
    assert_eq!(csv_rows(&ex1), 5);
    assert_eq!(stdout(&ex1).lines().next(), Some("x1,x2,word,len"));
    let id = bin(&["orbit", "--scenario", &scenario_path("identity"), "--base", "1,1", "--max-len", "5"]);
    assert_eq!(csv_rows(&id), 1);
}

#[test]
fn plot_edge_cases() {
    let dir = scratch("plot");
    let empty = dir.join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    let out = bin(&["plot", "--input", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let svg = stdout(&out);
    assert_eq!((svg.matches("<line").count(), svg.matches("<circle").count()), (2, 0));

    let line = dir.join("line.csv");
    let csv = stdout(&bin(&["orbit", "--scenario", &scenario_path("example3"), "--base", "1", "--max-len", "3"]));
    std::fs::write(&line, csv).unwrap();
    assert_eq!(bin(&["plot", "--input", line.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

fn plot_hash(dir: &Path, id: &str, base: [f64; 2], max_len: usize) -> String {
    let csv = dir.join(format!("{id}.csv"));
    let svg = dir.join(format!("{id}.svg"));
    let base = format!("{},{}", base[0], base[1]);
    let orbit = bin(&[
        "orbit",
        "--scenario",
        &scenario_path(id),
        "--base",
        &base,
        "--max-len",
        &max_len.to_string(),
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(orbit.status.code(), Some(0));
    let plot = bin(&["plot", "--input", csv.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    assert_eq!(plot.status.code(), Some(0));
    format!("{:016x}", fnv1a(&std::fs::read(svg).unwrap()))
}

#[test]
fn plot_pipeline_matches_the_oracle_hashes() {
    let dir = scratch("hashes");
    let minted = fixtures::load("plot_hashes").unwrap().values;
    for (id, base, max_len) in PLOT_CASES {
        assert_eq!(plot_hash(&dir, id, base, max_len), minted[id], "{id}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["example", "2"],
        vec!["detect", "--scenario", &scenario_path("rotation"), "--seed", "17"],
        vec!["classify", "--scenario", &scenario_path("example1")],
    ] {
        let first = bin(&args);
        let second = bin(&args);
        assert_eq!(first.status.code(), Some(0), "{args:?}");
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

#[test]
fn timing_is_opt_in() {
    let plain = stdout(&bin(&["detect", "--scenario", &scenario_path("example3")]));
    let timed = stdout(&bin(&["--timing", "detect", "--scenario", &scenario_path("example3")]));
    assert!(!plain.contains("timing_ms"));
    assert!(timed.contains("timing_ms"));
}

#[test]
fn example_reports_carry_the_expectation() {
    let out = bin(&["example", "4"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["matches"], true);
    assert_eq!(report["attractor"]["subspace"]["dim"], 1);
    assert_eq!(report["foliation"]["lift"]["minimal"], true);
}
