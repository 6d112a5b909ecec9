//! Single-signal baselines and the comparison table against AMRS.
//!
//! - VT: `min(1, V / (2 · P90(V)))` on social volume.
//! - ST: `clamp(max(0, -sentiment) / st_scale, 0, 1)`.
//! - CR: `(VT + ST) / 2`.
//! - MA: mean of normalized 20-day return volatility, positive volume
//!   z-score and absolute return, each through the expanding normalizer.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::metrics::{pr_auc, roc_auc};
use super::EvalError;
use crate::scoring::{FusedWindow, NormalizerState, ScoredWindow};
use crate::stats::{percentile, population_std};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum P90Mode {
    /// Percentile over history up to and including the day (causal).
    Expanding,
    /// Percentile over the whole series.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BaselineParams {
    pub vt_p90_mode: P90Mode,
    pub st_scale: f64,
    pub baseline_threshold: f64,
    pub volatility_window: usize,
}

impl Default for BaselineParams {
    fn default() -> Self {
        Self {
            vt_p90_mode: P90Mode::Expanding,
            st_scale: 0.5,
            baseline_threshold: 0.7,
            volatility_window: 20,
        }
    }
}

/// `min(1, v / (2 · p90))`; with `p90 = 0` any activity saturates.
pub fn vt_score(volume: f64, p90: f64) -> f64 {
    if p90 <= 0.0 {
        return if volume > 0.0 { 1.0 } else { 0.0 };
    }
    (volume / (2.0 * p90)).min(1.0)
}

pub fn baseline_vt(fused: &[FusedWindow], p: &BaselineParams) -> Vec<f64> {
    let volumes: Vec<f64> = fused.iter().map(|w| w.social_volume as f64).collect();
    match p.vt_p90_mode {
        P90Mode::Full => {
            let p90 = if volumes.is_empty() { 0.0 } else { percentile(&volumes, 0.9) };
            volumes.iter().map(|&v| vt_score(v, p90)).collect()
        }
        P90Mode::Expanding => (0..volumes.len())
            .map(|t| vt_score(volumes[t], percentile(&volumes[..=t], 0.9)))
            .collect(),
    }
}

pub fn st_score(avg_sentiment: f64, st_scale: f64) -> f64 {
    (avg_sentiment.min(0.0).abs() / st_scale).clamp(0.0, 1.0)
}

pub fn baseline_st(fused: &[FusedWindow], p: &BaselineParams) -> Vec<f64> {
    fused.iter().map(|w| st_score(w.avg_sentiment, p.st_scale)).collect()
}

pub fn baseline_cr(fused: &[FusedWindow], p: &BaselineParams) -> Vec<f64> {
    baseline_vt(fused, p)
        .into_iter()
        .zip(baseline_st(fused, p))
        .map(|(v, s)| (v + s) / 2.0)
        .collect()
}

/// Mean of three normalized inputs, clipped to `[0, 1]`.
pub fn ma_combine(volatility: f64, volume_change: f64, abs_return: f64) -> f64 {
    ((volatility + volume_change + abs_return) / 3.0).clamp(0.0, 1.0)
}

pub fn baseline_ma(fused: &[FusedWindow], p: &BaselineParams) -> Vec<f64> {
    let returns: Vec<f64> = fused.iter().map(|w| w.daily_return).collect();
    let mut sigma = NormalizerState::default();
    let mut dv = NormalizerState::default();
    let mut r = NormalizerState::default();
    (0..fused.len())
        .map(|t| {
            let lo = (t + 1).saturating_sub(p.volatility_window.max(1));
            let vol = population_std(&returns[lo..=t]);
            ma_combine(
                sigma.observe(vol),
                dv.observe(fused[t].volume_zscore.max(0.0)),
                r.observe(fused[t].daily_return.abs()),
            )
        })
        .collect()
}

/// Evaluation span with a contiguous block of positive days inside it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalWindow {
    pub start: NaiveDate,
    pub end: NaiveDate,
    pub positive_start: NaiveDate,
    pub positive_end: NaiveDate,
}

impl EvalWindow {
    pub fn contains(&self, d: NaiveDate) -> bool {
        self.start <= d && d <= self.end
    }

    pub fn is_positive(&self, d: NaiveDate) -> bool {
        self.positive_start <= d && d <= self.positive_end
    }

    /// Row indices of `dates` inside the window, with their labels.
    pub fn select(&self, dates: &[NaiveDate]) -> Vec<(usize, bool)> {
        dates
            .iter()
            .enumerate()
            .filter(|(_, d)| self.contains(**d))
            .map(|(i, d)| (i, self.is_positive(*d)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: String,
    pub roc_auc: f64,
    pub pr_auc: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub high_risk_days: usize,
    /// Trading days from the first alert to the first positive day; negative
    /// when the first alert comes late, absent without alerts.
    pub early_detection_days: Option<i64>,
}

/// Scores a full-series score vector over the window at `threshold`.
pub fn summarize_method(
    method: &str,
    scores: &[f64],
    selection: &[(usize, bool)],
    threshold: f64,
) -> Result<MethodSummary, EvalError> {
    if selection.is_empty() {
        return Err(EvalError::EmptyWindow(method.to_string()));
    }
    let s: Vec<f64> = selection.iter().map(|&(i, _)| scores[i]).collect();
    let l: Vec<bool> = selection.iter().map(|&(_, y)| y).collect();
    let (mut tp, mut fp, mut fneg) = (0usize, 0usize, 0usize);
    for (&x, &y) in s.iter().zip(&l) {
        match (y, x >= threshold) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (true, false) => fneg += 1,
            _ => {}
        }
    }
    let div = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let precision = div(tp, tp + fp);
    let recall = div(tp, tp + fneg);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    let first_alert = s.iter().position(|&x| x >= threshold);
    let first_positive = l.iter().position(|&y| y);
    Ok(MethodSummary {
        method: method.to_string(),
        roc_auc: roc_auc(&s, &l),
        pr_auc: pr_auc(&s, &l),
        precision,
        recall,
        f1,
        high_risk_days: tp + fp,
        early_detection_days: match (first_alert, first_positive) {
            (Some(a), Some(p)) => Some(p as i64 - a as i64),
            _ => None,
        },
    })
}

/// AMRS against the four baselines on one ticker's window, all at the
/// baseline threshold.
pub fn baseline_comparison(
    scored: &[ScoredWindow],
    window: &EvalWindow,
    p: &BaselineParams,
) -> Result<Vec<MethodSummary>, EvalError> {
    let fused: Vec<FusedWindow> = scored.iter().map(|s| s.window.clone()).collect();
    let dates: Vec<NaiveDate> = fused.iter().map(|w| w.date).collect();
    let selection = window.select(&dates);
    let amrs: Vec<f64> = scored.iter().map(|s| s.risk_score).collect();
    let methods: [(&str, Vec<f64>); 5] = [
        ("AMRS (Full)", amrs),
        ("Volume Threshold", baseline_vt(&fused, p)),
        ("Sentiment Threshold", baseline_st(&fused, p)),
        ("Combined Rule", baseline_cr(&fused, p)),
        ("Market Anomaly", baseline_ma(&fused, p)),
    ];
    methods
        .iter()
        .map(|(name, scores)| summarize_method(name, scores, &selection, p.baseline_threshold))
        .collect()
}
