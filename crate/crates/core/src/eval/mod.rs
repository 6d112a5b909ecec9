//! Forward-walk metrics, prospective logging, lead times, baselines,
//! ablations and weight sensitivity.

pub mod ablation;
pub mod baselines;
pub mod forward_walk;
pub mod lead_time;
pub mod metrics;
pub mod prediction_log;
pub mod report;
pub mod sensitivity;

use std::path::PathBuf;

use chrono::{DateTime, NaiveDate, Utc};
use thiserror::Error;

use crate::scoring::ScoringError;

pub use ablation::{ablation_run, standard_ablations, AblationSpec, AblationSummary};
pub use baselines::{
    baseline_comparison, baseline_cr, baseline_ma, baseline_st, baseline_vt, BaselineParams, EvalWindow,
    MethodSummary, P90Mode,
};
pub use forward_walk::{forward_walk, CausalScorer};
pub use lead_time::{event_id, lead_time, LeadTimeRecord, DEFAULT_LOOKBACK};
pub use metrics::{
    confusion_and_metrics, pr_auc, roc_auc, threshold_sweep, ForwardEvalRow, MetricsReport, DEFAULT_SWEEP,
};
pub use prediction_log::{
    join_log_with_labels, prospective_replay, trading_day_end, PredictionLog, PredictionLogEntry,
    ProspectiveConfig,
};
pub use report::Table;
pub use sensitivity::{weight_sensitivity, SensitivityParams, SensitivityRow};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("no scored data for {ticker} on {date}")]
    MissingCoverage { ticker: String, date: NaiveDate },
    #[error("{ticker} {date}: prefix score {prefix} differs from full-series score {full}")]
    LookAhead {
        ticker: String,
        date: NaiveDate,
        prefix: f64,
        full: f64,
    },
    #[error("{ticker} {date}: lookback needs {needed} trading days, only {available} available")]
    InsufficientHistory {
        ticker: String,
        date: NaiveDate,
        needed: usize,
        available: usize,
    },
    #[error("{path}: {source}")]
    StorageFailure {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Csv { path: PathBuf, message: String },
    #[error("{path}: line {line}: {reason}")]
    MalformedLogLine { path: PathBuf, line: usize, reason: String },
    #[error("`extra` is not valid JSON: {0}")]
    MalformedExtra(String),
    #[error("{ticker} {date}: prediction timestamp {timestamp} precedes the trading-day close")]
    PrematureTimestamp {
        ticker: String,
        date: NaiveDate,
        timestamp: DateTime<Utc>,
    },
    #[error("log entry at {timestamp} is older than the last entry at {previous}")]
    OutOfOrder {
        previous: DateTime<Utc>,
        timestamp: DateTime<Utc>,
    },
    #[error("invalid prediction entry: {0}")]
    InvalidEntry(String),
    #[error("evaluation window for {0} selects no rows")]
    EmptyWindow(String),
    #[error(transparent)]
    Scoring(#[from] ScoringError),
}
