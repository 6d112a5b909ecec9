//! Pipeline orchestration (`ingest`, `score`, `evaluate`) and the read-only
//! JSON API (`serve`) over the scored stage.

pub mod api;
pub mod commands;
pub mod config;

use std::path::PathBuf;

use thiserror::Error;

pub use commands::{evaluate, ingest, score, synth_market, EvalMode};
pub use config::{Overrides, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config {path}: {reason}")]
    Config { path: PathBuf, reason: String },
    #[error("missing {stage} stage for {ticker} at {path}; run `amrs {hint}` first")]
    MissingStage {
        stage: &'static str,
        ticker: String,
        path: PathBuf,
        hint: &'static str,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] amrs_core::Error),
}

macro_rules! via_core {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Core(e.into())
            }
        }
    )*};
}

via_core!(
    amrs_core::ingest::IngestError,
    amrs_core::ingest::store::StoreError,
    amrs_core::social::SocialError,
    amrs_core::market::MarketError,
    amrs_core::scoring::ScoringError,
    amrs_core::eval::EvalError
);

/// Renders a report table as left-aligned text columns.
pub fn render_table(t: &amrs_core::eval::Table) -> String {
    let mut widths: Vec<usize> = t.columns.iter().map(|c| c.chars().count()).collect();
    for r in &t.rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = line(&t.columns);
    out.push('\n');
    for r in &t.rows {
        out.push_str(&line(r));
        out.push('\n');
    }
    out
}
