//! Early-warning lead time ahead of labeled events, in trading days.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::scoring::ScoredWindow;

pub const DEFAULT_LOOKBACK: usize = 45;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeadTimeRecord {
    pub ticker: String,
    pub event_id: String,
    pub event_start_date: NaiveDate,
    pub first_alert_date: Option<NaiveDate>,
    pub lead_time_days: Option<i64>,
    pub detected_pre_event: bool,
    pub max_risk_pre_event: f64,
}

pub fn event_id(ticker: &str, date: NaiveDate) -> String {
    format!("{ticker}-{date}")
}

/// Finds the earliest day in the `lookback` trading days strictly before
/// `event_start` whose score reaches `alert_threshold`. The event start is
/// taken as the first trading day on or after `event_start`.
pub fn lead_time(
    scored: &[ScoredWindow],
    event_start: NaiveDate,
    alert_threshold: f64,
    lookback: usize,
) -> Result<LeadTimeRecord, EvalError> {
    let ticker = scored.first().map(|s| s.window.ticker.clone()).unwrap_or_default();
    let e = scored.partition_point(|s| s.window.date < event_start);
    if e == scored.len() {
        return Err(EvalError::MissingCoverage {
            ticker,
            date: event_start,
        });
    }
    if e < lookback {
        return Err(EvalError::InsufficientHistory {
            ticker,
            date: event_start,
            needed: lookback,
            available: e,
        });
    }
    let window = &scored[e - lookback..e];
    let first = window.iter().position(|s| s.risk_score >= alert_threshold);
    let max_risk_pre_event = window.iter().map(|s| s.risk_score).fold(0.0, f64::max);
    let first_alert_date = first.map(|i| window[i].window.date);
    Ok(LeadTimeRecord {
        event_id: event_id(&ticker, event_start),
        ticker,
        event_start_date: event_start,
        first_alert_date,
        lead_time_days: first.map(|i| (lookback - i) as i64),
        detected_pre_event: first.is_some(),
        max_risk_pre_event,
    })
}
