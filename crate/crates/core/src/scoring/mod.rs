//! Fusion onto trading days, causal normalization and the AMRS pass.

pub mod amrs;
pub mod fusion;
pub mod normalizer;
pub mod pipeline;

use chrono::NaiveDate;
use thiserror::Error;

pub use amrs::{
    amrs, market_component, risk_level, supporting_anomalies, tag_suspicious, weighted_score, Anomaly,
    AnomalyInputs, Component, Components, RiskLevel, SuspicionParams, WeightConfig,
};
pub use fusion::{fuse, FusedWindow, FUSED_COLUMNS};
pub use normalizer::{normalize_expanding, NormalizerState};
pub use pipeline::{rescore, score_pipeline, ComponentNormalizers, ScoredWindow, ScoringConfig};

#[derive(Debug, Error, PartialEq)]
pub enum ScoringError {
    #[error("ticker mismatch: expected {expected}, found {found}")]
    TickerMismatch { expected: String, found: String },
    #[error("{0}: rows must be in strictly increasing date order")]
    UnorderedInput(String),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("unknown component `{0}` (expected vol, sent, bot, coord or mkt)")]
    UnknownComponent(String),
    #[error("unknown risk level `{0}`")]
    UnknownRiskLevel(String),
    #[error("{ticker}: no row for {date}")]
    MissingDate { ticker: String, date: NaiveDate },
}
