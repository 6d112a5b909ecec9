//! Leakage-free forward-walk scoring of labeled days.

use std::collections::BTreeMap;

use super::metrics::ForwardEvalRow;
use super::EvalError;
use crate::ingest::GroundTruthLabel;
use crate::scoring::{score_pipeline, FusedWindow, ScoringConfig};

/// A scorer whose output for row `t` may only depend on rows `0..=t`.
pub trait CausalScorer {
    /// Risk scores for every row of one ticker's ascending series.
    fn score_series(&self, fused: &[FusedWindow]) -> Result<Vec<f64>, EvalError>;
}

impl CausalScorer for ScoringConfig {
    fn score_series(&self, fused: &[FusedWindow]) -> Result<Vec<f64>, EvalError> {
        Ok(score_pipeline(fused, self)?.into_iter().map(|s| s.risk_score).collect())
    }
}

/// Scores each labeled day on the prefix of its series ending that day and
/// checks the result against the full-series run. Rows come back ordered by
/// `(ticker, date)`.
pub fn forward_walk<S: CausalScorer>(
    labels: &[GroundTruthLabel],
    series: &BTreeMap<String, Vec<FusedWindow>>,
    scorer: &S,
    threshold: f64,
) -> Result<Vec<ForwardEvalRow>, EvalError> {
    let mut sorted: Vec<&GroundTruthLabel> = labels.iter().collect();
    sorted.sort_by(|a, b| (&a.ticker, a.date).cmp(&(&b.ticker, b.date)));

    let mut full_runs: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    let mut out = Vec::with_capacity(sorted.len());
    for label in sorted {
        let missing = || EvalError::MissingCoverage {
            ticker: label.ticker.clone(),
            date: label.date,
        };
        let fused = series.get(&label.ticker).ok_or_else(missing)?;
        let idx = fused
            .binary_search_by_key(&label.date, |w| w.date)
            .map_err(|_| missing())?;
        if !full_runs.contains_key(label.ticker.as_str()) {
            full_runs.insert(label.ticker.as_str(), scorer.score_series(fused)?);
        }
        let full = full_runs[label.ticker.as_str()][idx];
        let prefix = scorer.score_series(&fused[..=idx])?;
        let score = *prefix.last().expect("prefix is non-empty");
        if score.to_bits() != full.to_bits() {
            return Err(EvalError::LookAhead {
                ticker: label.ticker.clone(),
                date: label.date,
                prefix: score,
                full,
            });
        }
        out.push(ForwardEvalRow {
            ticker: label.ticker.clone(),
            date: label.date,
            true_label: label.label,
            predicted_label: u8::from(score >= threshold),
            risk_score: score,
        });
    }
    Ok(out)
}
