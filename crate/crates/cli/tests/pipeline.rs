//! End-to-end CLI behavior on the bundled fixture.

mod common;

use std::process::Command;

use amrs_cli::{evaluate, ingest, score, CliError, EvalMode};
use amrs_core::eval::{PredictionLog, Table};
use amrs_core::ingest::store::{DatasetStore, Stage, StoreError};
use amrs_core::scoring::{FusedWindow, ScoredWindow};
use common::*;

const GOLDEN_REPORTS: [&str; 10] = [
    "forward_walk",
    "forward_walk_metrics",
    "prospective",
    "prospective_metrics",
    "lead_time",
    "thresholds",
    "baselines",
    "ablation",
    "weights",
    "gme_jan_2021",
];

fn amrs() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_amrs"));
    c.env_remove("AMRS_CONFIG").env("RUST_LOG", "warn");
    c
}

/// The scored GME rows for January 2021, frozen alongside the reports.
fn gme_january(run: &FixtureRun) -> Vec<u8> {
    let rows: Vec<ScoredWindow> = run.cfg.store().read("GME").unwrap();
    let mut t = Table::new(&["date", "s_vol", "s_sent", "s_bot", "s_coord", "s_mkt", "risk_score", "risk_level"]);
    for s in rows.iter().filter(|s| s.window.date.format("%Y-%m").to_string() == "2021-01") {
        t.push(vec![
            s.window.date.to_string(),
            format!("{:.6}", s.s_vol),
            format!("{:.6}", s.s_sent),
            format!("{:.6}", s.s_bot),
            format!("{:.6}", s.s_coord),
            format!("{:.6}", s.s_mkt),
            format!("{:.6}", s.risk_score),
            s.risk_level.to_string(),
        ]);
    }
    t.to_csv().into_bytes()
}

#[test]
fn reports_match_golden_files() {
    let run = shared_run();
    let mut failures = Vec::new();
    for name in GOLDEN_REPORTS {
        let bytes = if name == "gme_jan_2021" {
            gme_january(run)
        } else {
            std::fs::read(run.cfg.reports_dir().join(format!("{name}.csv"))).unwrap()
        };
        if let Err(e) = check_golden(&format!("{name}.csv"), &bytes) {
            failures.push(e);
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n\n"));
}

#[test]
fn ingest_reports_counts_and_writes_every_stage() {
    let run = shared_run();
    assert!(run.stdout.contains("GME: 337 market rows"), "{}", run.stdout);
    let store = run.cfg.store();
    for t in &run.cfg.tickers {
        for stage in [Stage::RawSocial, Stage::Market, Stage::Fused, Stage::Scored] {
            assert!(store.exists(stage, t), "{t} {stage:?}");
        }
    }
    let scored: Vec<ScoredWindow> = store.read("GME").unwrap();
    assert_eq!(scored.len(), 337);
}

#[test]
fn thresholds_mode_writes_six_rows() {
    let run = shared_run();
    let t = Table::read(&run.cfg.reports_dir().join("thresholds.csv")).unwrap();
    let taus: Vec<&str> = t.rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(taus, ["0.20", "0.30", "0.40", "0.50", "0.60", "0.70"]);
}

#[test]
fn two_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_pipeline(&fixture_config(a.path(), None));
    run_pipeline(&fixture_config(b.path(), None));
    let (sa, sb) = (snapshot(a.path()), snapshot(b.path()));
    assert_eq!(sa.keys().collect::<Vec<_>>(), sb.keys().collect::<Vec<_>>());
    assert!(sa.keys().any(|p| p.ends_with("predictions.jsonl")));
    for (path, bytes) in &sa {
        assert!(bytes == &sb[path], "{} differs between runs", path.display());
    }
}

#[test]
fn rerunning_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture_config(dir.path(), Some(&["GME", "AMC"]));
    run_pipeline(&cfg);
    let first = snapshot(dir.path());
    let log_len = PredictionLog::read(&cfg.prediction_log_path()).unwrap().len();
    run_pipeline(&cfg);
    // The prospective step only appends entries newer than the log's tail.
    assert_eq!(PredictionLog::read(&cfg.prediction_log_path()).unwrap().len(), log_len);
    assert_eq!(first, snapshot(dir.path()));
}

#[test]
fn missing_ohlcv_file_fails_naming_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = amrs()
        .args(["--config", fixture_config_path().to_str().unwrap(), "--tickers", "GME,NOPE", "ingest"])
        .arg("--data-root")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("NOPE.csv"), "{err}");
}

#[test]
fn unknown_mode_is_a_usage_error() {
    let out = amrs()
        .args(["--config", fixture_config_path().to_str().unwrap(), "evaluate", "--mode", "bogus"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bogus") && err.contains("forward_walk"), "{err}");
    assert_eq!(EvalMode::from_name("bogus"), None);
}

#[test]
fn score_before_ingest_names_the_missing_stage() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture_config(dir.path(), Some(&["GME"]));
    let err = score(&cfg, &mut Vec::new()).unwrap_err();
    assert!(matches!(err, CliError::MissingStage { stage: "fused", .. }), "{err}");
    assert!(err.to_string().contains("amrs ingest"));
}

#[test]
fn corrupted_stage_surfaces_corrupt_file_with_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture_config(dir.path(), Some(&["BB"]));
    ingest(&cfg, &mut Vec::new()).unwrap();
    let path = cfg.store().path(Stage::Fused, "BB");
    let bytes = std::fs::read(&path).unwrap();
    std::fs::write(&path, &bytes[..bytes.len() / 2]).unwrap();
    let err = score(&cfg, &mut Vec::new()).unwrap_err();
    let CliError::Core(amrs_core::Error::Store(StoreError::CorruptFile { path: p, .. })) = &err else {
        panic!("expected CorruptFile, got {err:?}");
    };
    assert_eq!(p, &path);
    assert!(err.to_string().contains(&path.display().to_string()));
}

#[test]
fn empty_fused_stage_scores_to_empty_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture_config(dir.path(), Some(&["MSFT"]));
    let store = DatasetStore::new(cfg.store().root());
    store.write::<FusedWindow>("MSFT", &[]).unwrap();
    let mut out = Vec::new();
    score(&cfg, &mut out).unwrap();
    let scored: Vec<ScoredWindow> = store.read("MSFT").unwrap();
    assert!(scored.is_empty());
    assert!(String::from_utf8(out).unwrap().contains("MSFT: 0 rows"));
}

#[test]
fn evaluate_without_scores_names_the_missing_stage() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture_config(dir.path(), Some(&["GME"]));
    ingest(&cfg, &mut Vec::new()).unwrap();
    let err = evaluate(&cfg, EvalMode::LeadTime, &mut Vec::new()).unwrap_err();
    assert!(matches!(err, CliError::MissingStage { stage: "scored", hint: "score", .. }), "{err}");
}
