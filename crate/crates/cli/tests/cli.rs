use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lpm_cli::Document;
use lpm_core::{mine, CsvConfig, EventLog, MinerConfig};

fn figure1() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/figure1.csv")
}

fn lpm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_figure1(out: &Path, extra: &[&str]) -> Output {
    let log = figure1();
    let mut args = vec![
        "--log",
        log.to_str().unwrap(),
        "--min-support",
        "0.9",
        "--min-leaves",
        "3",
        "--max-iterations",
        "2",
        "--out-dir",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let output = lpm(&args);
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    output
}

fn document(out: &Path) -> Document {
    serde_json::from_str(&fs::read_to_string(out.join("lpms.json")).unwrap()).unwrap()
}

#[test]
fn missing_log_is_an_input_error() {
    let out = lpm(&["--log", "/nonexistent/log.csv"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn invalid_flags_are_configuration_errors() {
    let log = figure1();
    let log = log.to_str().unwrap();
    for bad in [
        vec!["--log", log, "--top-k", "0"],
        vec!["--log", log, "--min-support", "1.5"],
        vec!["--log", log, "--weights", "1,2"],
        vec!["--log", log, "--weights", "0,0,0,0,0"],
        vec!["--log", log, "--min-leaves", "1"],
        vec!["--log", "log.txt"],
        vec!["--log", log, "--output", "svg"],
    ] {
        assert_eq!(lpm(&bad).status.code(), Some(2), "{bad:?}");
    }
}

#[test]
fn figure1_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_figure1(dir.path(), &[]);
    let doc = document(dir.path());
    let hit = doc
        .results
        .iter()
        .find(|e| e.tree == "seq(A,and(B,C))")
        .expect("pattern listed");
    assert_eq!(hit.support, 0.928571);
    assert_eq!(hit.k_total, 13);
    assert_eq!(hit.per_activity["A"].fit, 13);
    assert_eq!(hit.per_activity["A"].total, 21);
    assert_eq!(hit.coverage, 0.909091);
    assert_eq!(hit.language_fit, 1.0);

    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), doc.results.len());
    let ranks: Vec<usize> = doc.results.iter().map(|e| e.rank).collect();
    assert_eq!(ranks, (1..=doc.results.len()).collect::<Vec<_>>());
    for e in &doc.results {
        assert!(dir.path().join(format!("lpm_{}.dot", e.rank)).exists());
    }
    let dot = fs::read_to_string(dir.path().join(format!("lpm_{}.dot", hit.rank))).unwrap();
    assert!(dot.contains("label=\"A 13/21\""));
    assert!(dot.contains("label=\"C 13/20\""));
    assert_eq!(dot.matches("style=filled").count(), 1);
}

#[test]
fn determinism_threshold_ranks_the_pattern_first() {
    let dir = tempfile::tempdir().unwrap();
    run_figure1(
        dir.path(),
        &["--min-determinism", "0.8", "--output", "json"],
    );
    let doc = document(dir.path());
    assert_eq!(doc.results[0].tree, "seq(A,and(B,C))");
    assert!(!dir.path().join("lpm_1.dot").exists());
}

#[test]
fn output_is_byte_stable() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_figure1(a.path(), &["--top-k", "5"]);
    run_figure1(b.path(), &["--top-k", "5"]);
    for name in ["lpms.json", "lpm_1.dot", "lpm_5.dot"] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn json_round_trip_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    run_figure1(dir.path(), &["--weights", "1,1,1,2,0", "--output", "json"]);
    let doc = document(dir.path());
    assert_eq!(doc.config.weights.determinism, 0.4);
    assert_eq!(doc.config.max_iterations, 2);

    let log =
        EventLog::parse_csv(fs::File::open(figure1()).unwrap(), &CsvConfig::default()).unwrap();
    let config = MinerConfig {
        min_support: 0.9,
        max_iterations: 2,
        weights: lpm_core::MetricWeights::new(1.0, 1.0, 1.0, 2.0, 0.0).unwrap(),
        ..MinerConfig::default()
    };
    let result = mine(&log, &config).unwrap();
    assert_eq!(doc.results.len(), result.selected.len());
    for (e, m) in doc.results.iter().zip(&result.selected) {
        assert_eq!(e.tree, m.tree.to_string());
        let r = &m.report;
        for (got, want) in [
            (e.score, r.weighted_score),
            (e.support, r.support),
            (e.confidence, r.confidence),
            (e.language_fit, r.language_fit),
            (e.determinism, r.determinism),
            (e.coverage, r.coverage),
        ] {
            assert!((got - want).abs() <= 5e-7, "{got} vs {want}");
        }
    }
}

#[test]
fn xes_input() {
    let dir = tempfile::tempdir().unwrap();
    let mut xes = String::from("<?xml version=\"1.0\"?>\n<log>\n");
    for _ in 0..4 {
        xes.push_str("  <trace>\n");
        for a in ["x", "y", "z", "q", "x", "y", "z"] {
            xes.push_str(&format!(
                "    <event><string key=\"concept:name\" value=\"{a}\"/></event>\n"
            ));
        }
        xes.push_str("  </trace>\n");
    }
    xes.push_str("</log>\n");
    let path = dir.path().join("log.xes");
    fs::write(&path, xes).unwrap();
    let out = lpm(&[
        "--log",
        path.to_str().unwrap(),
        "--max-iterations",
        "2",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = document(dir.path());
    assert!(doc
        .results
        .iter()
        .any(|e| e.tree == "seq(x,seq(y,z))" && e.k_total == 8));
}

#[test]
fn malformed_log_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    fs::write(&path, "case,event\n1,a\n").unwrap();
    let out = lpm(&["--log", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}
