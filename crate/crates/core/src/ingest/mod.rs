//! Loaders, the synthetic corpus generator and stage persistence.

pub mod ground_truth;
pub mod ohlcv;
pub mod posts;
pub mod store;
pub mod synthetic;

use std::path::PathBuf;

use chrono::NaiveDate;
use thiserror::Error;

pub use ground_truth::{load_ground_truth, Confidence, GroundTruthLabel, LabelSource, ManipulationType};
pub use ohlcv::{load_ohlcv, write_ohlcv_csv, OhlcvBar};
pub use posts::{compute_author_stats, AuthorStats, PostRecord, StoredPost};
pub use synthetic::{
    generate_synthetic_market, generate_synthetic_social, load_scenario_file, EventWindow,
    MarketScenarioConfig, MarketShock, ScenarioFile, SocialCorpus, SyntheticScenarioConfig,
};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: malformed CSV: {message}")]
    Csv { path: PathBuf, message: String },
    #[error("{path}: missing column `{column}`")]
    MissingColumn { path: PathBuf, column: String },
    #[error("{path}: row {row}: field `{column}` has invalid value {value:?}")]
    NonNumericField {
        path: PathBuf,
        row: usize,
        column: String,
        value: String,
    },
    #[error("{path}: row {row}: invalid bar: {reason}")]
    InvalidBar {
        path: PathBuf,
        row: usize,
        reason: String,
    },
    #[error("{path}: row {row}: date {date} is earlier than previous date {previous}")]
    NonMonotonicDates {
        path: PathBuf,
        row: usize,
        previous: NaiveDate,
        date: NaiveDate,
    },
    #[error("{path}: row {row}: duplicate date {date}")]
    DuplicateDate {
        path: PathBuf,
        row: usize,
        date: NaiveDate,
    },
    #[error("{path}: header {found:?} does not match expected {expected:?}")]
    SchemaMismatch {
        path: PathBuf,
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("{path}: row {row}: label {label} conflicts with manipulation type `{manipulation_type}`")]
    LabelTypeConflict {
        path: PathBuf,
        row: usize,
        label: u8,
        manipulation_type: String,
    },
    #[error("{path}: row {row}: duplicate label for ({ticker}, {date})")]
    DuplicateLabel {
        path: PathBuf,
        row: usize,
        ticker: String,
        date: NaiveDate,
    },
    #[error("invalid scenario config: {0}")]
    InvalidConfig(String),
}
