//! Declarative run configuration (TOML) with CLI/env overrides.
//!
//! Relative paths in the file resolve against the file's directory;
//! relative override paths resolve against the working directory.

use std::path::{Path, PathBuf};

use amrs_core::eval::{BaselineParams, EvalWindow, SensitivityParams, DEFAULT_LOOKBACK, DEFAULT_SWEEP};
use amrs_core::ingest::store::DatasetStore;
use amrs_core::scoring::{Component, ScoringConfig};
use amrs_core::stages::FeatureParams;
use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub tickers: Vec<String>,
    #[serde(default)]
    pub date_range: Option<DateRange>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_model_version")]
    pub model_version: String,
    pub paths: Paths,
    #[serde(default)]
    pub features: FeatureParams,
    #[serde(default)]
    pub scoring: ScoringConfig,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default)]
    pub lead_time: LeadTimeConfig,
    #[serde(default)]
    pub baselines: BaselineParams,
    #[serde(default)]
    pub sensitivity: SensitivityParams,
    #[serde(default)]
    pub case_study: Option<CaseStudy>,
    #[serde(default)]
    pub prospective: ProspectiveSettings,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_model_version() -> String {
    format!("amrs-{}", env!("CARGO_PKG_VERSION"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DateRange {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Paths {
    /// Holds `processed/<stage>/`, `reports/` and the default prediction log.
    #[serde(default = "default_data_root")]
    pub data_root: PathBuf,
    /// Directory of `<TICKER>.csv` OHLCV files.
    pub ohlcv_dir: PathBuf,
    /// Synthetic social scenarios (`[[social]]` tables).
    pub scenarios: PathBuf,
    pub ground_truth: PathBuf,
    #[serde(default)]
    pub lexicon: Option<PathBuf>,
    #[serde(default)]
    pub prediction_log: Option<PathBuf>,
}

fn default_data_root() -> PathBuf {
    PathBuf::from("data")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    /// Alert cut for forward-walk and prospective predictions.
    pub operating: f64,
    /// Early-warning cut for lead times.
    pub alert: f64,
    /// Cut for counting high-risk days in ablations.
    pub high_risk: f64,
    pub sweep: Vec<f64>,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            operating: 0.5,
            alert: 0.55,
            high_risk: 0.5,
            sweep: DEFAULT_SWEEP.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LeadTimeConfig {
    pub lookback: usize,
}

impl Default for LeadTimeConfig {
    fn default() -> Self {
        Self {
            lookback: DEFAULT_LOOKBACK,
        }
    }
}

/// The single-ticker window used by the baseline, ablation and weight
/// sensitivity reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseStudy {
    pub ticker: String,
    pub start: NaiveDate,
    pub end: NaiveDate,
    pub positive_start: NaiveDate,
    pub positive_end: NaiveDate,
    /// Ablation span; defaults to `start..=end`.
    #[serde(default)]
    pub ablation_start: Option<NaiveDate>,
    #[serde(default)]
    pub ablation_end: Option<NaiveDate>,
}

impl CaseStudy {
    pub fn window(&self) -> EvalWindow {
        EvalWindow {
            start: self.start,
            end: self.end,
            positive_start: self.positive_start,
            positive_end: self.positive_end,
        }
    }

    pub fn ablation_span(&self) -> (NaiveDate, NaiveDate) {
        (self.ablation_start.unwrap_or(self.start), self.ablation_end.unwrap_or(self.end))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProspectiveSettings {
    pub run_id: String,
    /// Trailing rows the simulated daily job scores with; all history if unset.
    pub history_days: Option<usize>,
    pub from: Option<NaiveDate>,
    pub to: Option<NaiveDate>,
}

impl Default for ProspectiveSettings {
    fn default() -> Self {
        Self {
            run_id: "prospective".into(),
            history_days: None,
            from: None,
            to: None,
        }
    }
}

/// Command-line and environment overrides, applied after loading.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub data_root: Option<PathBuf>,
    pub seed: Option<u64>,
    pub tickers: Option<Vec<String>>,
    pub threshold: Option<f64>,
    pub model_version: Option<String>,
    pub prediction_log: Option<PathBuf>,
    /// `vol=0.3,sent=0.1,...`; unlisted weights keep their configured value.
    pub weights: Option<String>,
}

fn invalid(path: &Path, reason: impl Into<String>) -> CliError {
    CliError::Config {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

fn absolutize(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

impl RunConfig {
    /// Parses, resolves paths against the file's directory, applies overrides
    /// and validates.
    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| invalid(path, e.to_string()))?;
        let mut cfg: RunConfig = toml::from_str(&text).map_err(|e| invalid(path, e.to_string()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve_paths(base);
        cfg.apply(overrides).map_err(|r| invalid(path, r))?;
        cfg.validate().map_err(|r| invalid(path, r))?;
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let p = &mut self.paths;
        p.data_root = absolutize(base, &p.data_root);
        p.ohlcv_dir = absolutize(base, &p.ohlcv_dir);
        p.scenarios = absolutize(base, &p.scenarios);
        p.ground_truth = absolutize(base, &p.ground_truth);
        p.lexicon = p.lexicon.as_deref().map(|l| absolutize(base, l));
        p.prediction_log = p.prediction_log.as_deref().map(|l| absolutize(base, l));
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), String> {
        let cwd = std::env::current_dir().unwrap_or_default();
        if let Some(root) = &o.data_root {
            self.paths.data_root = absolutize(&cwd, root);
        }
        if let Some(log) = &o.prediction_log {
            self.paths.prediction_log = Some(absolutize(&cwd, log));
        }
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if let Some(t) = &o.tickers {
            self.tickers = t.clone();
        }
        if let Some(t) = o.threshold {
            self.thresholds.operating = t;
        }
        if let Some(v) = &o.model_version {
            self.model_version = v.clone();
        }
        if let Some(spec) = &o.weights {
            for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let (name, value) = part
                    .split_once('=')
                    .ok_or_else(|| format!("weight override `{part}` is not name=value"))?;
                let c: Component = name.trim().parse().map_err(|e| format!("{e}"))?;
                let w: f64 = value
                    .trim()
                    .parse()
                    .map_err(|_| format!("weight override `{part}` has a non-numeric value"))?;
                self.scoring.weights.set(c, w);
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.tickers.is_empty() {
            return Err("`tickers` must not be empty".into());
        }
        if let Some(t) = self.tickers.iter().find(|t| t.trim().is_empty() || t.contains(['/', '\\'])) {
            return Err(format!("invalid ticker {t:?}"));
        }
        if let Some(r) = self.date_range {
            if r.start > r.end {
                return Err(format!("date_range start {} is after end {}", r.start, r.end));
            }
        }
        self.scoring.weights.validate().map_err(|e| e.to_string())?;
        self.features.social.validate().map_err(|e| e.to_string())?;
        self.features.rolling.validate().map_err(|e| e.to_string())?;
        let t = &self.thresholds;
        for (name, v) in [("operating", t.operating), ("alert", t.alert), ("high_risk", t.high_risk)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(format!("thresholds.{name} = {v} is outside [0, 1]"));
            }
        }
        if let Some(v) = t.sweep.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(format!("sweep threshold {v} is outside [0, 1]"));
        }
        if !(self.baselines.baseline_threshold > 0.0 && self.baselines.baseline_threshold < 1.0) {
            return Err("baselines.baseline_threshold must be in (0, 1)".into());
        }
        if self.lead_time.lookback == 0 {
            return Err("lead_time.lookback must be >= 1".into());
        }
        if let Some(c) = &self.case_study {
            let w = c.window();
            if !(w.start <= w.positive_start && w.positive_start <= w.positive_end && w.positive_end <= w.end) {
                return Err("case_study positive span must lie inside start..=end".into());
            }
        }
        Ok(())
    }

    pub fn store(&self) -> DatasetStore {
        DatasetStore::new(self.paths.data_root.join("processed"))
    }

    pub fn reports_dir(&self) -> PathBuf {
        self.paths.data_root.join("reports")
    }

    pub fn prediction_log_path(&self) -> PathBuf {
        self.paths
            .prediction_log
            .clone()
            .unwrap_or_else(|| self.paths.data_root.join("predictions.jsonl"))
    }

    pub fn ohlcv_path(&self, ticker: &str) -> PathBuf {
        self.paths.ohlcv_dir.join(format!("{ticker}.csv"))
    }

    pub fn in_range(&self, d: NaiveDate) -> bool {
        self.date_range.is_none_or(|r| r.start <= d && d <= r.end)
    }
}
