//! Fixture runs shared by the CLI integration suites.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use amrs_cli::{evaluate, ingest, score, EvalMode, Overrides, RunConfig};
use tempfile::TempDir;

pub fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn fixture_config_path() -> PathBuf {
    repo_root().join("fixtures/amrs.toml")
}

/// The bundled fixture config writing under `data_root`.
pub fn fixture_config(data_root: &Path, tickers: Option<&[&str]>) -> RunConfig {
    let overrides = Overrides {
        data_root: Some(data_root.to_path_buf()),
        tickers: tickers.map(|t| t.iter().map(|s| s.to_string()).collect()),
        ..Overrides::default()
    };
    RunConfig::load(&fixture_config_path(), &overrides).expect("fixture config loads")
}

/// ingest → score → evaluate (all modes); returns the combined stdout.
pub fn run_pipeline(cfg: &RunConfig) -> String {
    let mut out = Vec::new();
    ingest(cfg, &mut out).expect("ingest");
    score(cfg, &mut out).expect("score");
    evaluate(cfg, EvalMode::All, &mut out).expect("evaluate");
    String::from_utf8(out).expect("utf-8 output")
}

pub struct FixtureRun {
    pub dir: TempDir,
    pub cfg: RunConfig,
    pub stdout: String,
}

/// One full fixture run per test binary.
pub fn shared_run() -> &'static FixtureRun {
    static RUN: OnceLock<FixtureRun> = OnceLock::new();
    RUN.get_or_init(|| {
        let dir = tempfile::tempdir().expect("tempdir");
        let cfg = fixture_config(dir.path(), None);
        let stdout = run_pipeline(&cfg);
        FixtureRun { dir, cfg, stdout }
    })
}

/// Every file under `root`, keyed by relative path.
pub fn snapshot(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>) {
        let mut entries: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
        entries.sort();
        for p in entries {
            if p.is_dir() {
                walk(root, &p, out);
            } else {
                out.insert(p.strip_prefix(root).unwrap().to_path_buf(), std::fs::read(&p).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out);
    out
}

pub const GOLDEN_ENV: &str = "AMRS_UPDATE_GOLDEN";

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Compares `actual` with the stored golden file, rewriting it instead
/// when `AMRS_UPDATE_GOLDEN=1`.
pub fn check_golden(name: &str, actual: &[u8]) -> Result<(), String> {
    let path = golden_dir().join(name);
    if std::env::var(GOLDEN_ENV).is_ok_and(|v| v == "1") {
        std::fs::create_dir_all(golden_dir()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return Ok(());
    }
    let want = std::fs::read(&path).map_err(|e| format!("{}: {e} (set {GOLDEN_ENV}=1 to create)", path.display()))?;
    if want == actual {
        Ok(())
    } else {
        Err(format!(
            "{} differs from the current output:\n--- golden\n{}\n--- actual\n{}",
            path.display(),
            String::from_utf8_lossy(&want),
            String::from_utf8_lossy(actual)
        ))
    }
}
