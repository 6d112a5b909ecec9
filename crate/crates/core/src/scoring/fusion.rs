//! Alignment of social aggregates onto the market's trading-day axis.

use std::collections::HashMap;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::ScoringError;
use crate::ingest::store::{col, ColumnDef, ColumnType, Stage, StageRow};
use crate::market::MarketDay;
use crate::social::DailySocialFeatures;

/// One ticker-day of aligned social and market features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FusedWindow {
    pub ticker: String,
    pub date: NaiveDate,
    pub social_volume: u64,
    pub avg_sentiment: f64,
    pub unique_authors: u64,
    pub avg_bot_score: f64,
    pub bot_heavy_post_ratio: f64,
    pub open: f64,
    pub high: f64,
    pub low: f64,
    pub close: f64,
    pub adj_close: f64,
    pub volume: f64,
    #[serde(rename = "return")]
    pub daily_return: f64,
    pub volume_mean: f64,
    pub volume_std: f64,
    pub volume_zscore: f64,
    pub is_volume_anomaly: bool,
    pub coordination_score: f64,
}

/// Fused-stage column order.
pub const FUSED_COLUMNS: [ColumnDef; 19] = [
    col("ticker", ColumnType::Str),
    col("date", ColumnType::Date),
    col("social_volume", ColumnType::U64),
    col("avg_sentiment", ColumnType::F64),
    col("unique_authors", ColumnType::U64),
    col("avg_bot_score", ColumnType::F64),
    col("bot_heavy_post_ratio", ColumnType::F64),
    col("open", ColumnType::F64),
    col("high", ColumnType::F64),
    col("low", ColumnType::F64),
    col("close", ColumnType::F64),
    col("adj_close", ColumnType::F64),
    col("volume", ColumnType::F64),
    col("return", ColumnType::F64),
    col("volume_mean", ColumnType::F64),
    col("volume_std", ColumnType::F64),
    col("volume_zscore", ColumnType::F64),
    col("is_volume_anomaly", ColumnType::Bool),
    col("coordination_score", ColumnType::F64),
];

impl StageRow for FusedWindow {
    const STAGE: Stage = Stage::Fused;
    fn schema() -> Vec<ColumnDef> {
        FUSED_COLUMNS.to_vec()
    }
}

impl FusedWindow {
    fn new(m: &MarketDay, s: Option<&DailySocialFeatures>) -> Self {
        let empty = DailySocialFeatures::empty(&m.ticker, m.date);
        let s = s.unwrap_or(&empty);
        Self {
            ticker: m.ticker.clone(),
            date: m.date,
            social_volume: s.social_volume,
            avg_sentiment: s.avg_sentiment,
            unique_authors: s.unique_authors,
            avg_bot_score: s.avg_bot_score,
            bot_heavy_post_ratio: s.bot_heavy_post_ratio,
            open: m.open,
            high: m.high,
            low: m.low,
            close: m.close,
            adj_close: m.adj_close,
            volume: m.volume,
            daily_return: m.daily_return,
            volume_mean: m.volume_mean,
            volume_std: m.volume_std,
            volume_zscore: m.volume_zscore,
            is_volume_anomaly: m.is_volume_anomaly,
            coordination_score: s.coordination_score,
        }
    }
}

/// Left-joins social rows onto market days. Social rows must already be keyed
/// by trading day (see [`crate::social::aggregate_social_by_trading_day`]);
/// market days without one are zero-filled and social rows on dates the
/// market does not have are dropped with a warning.
pub fn fuse(social: &[DailySocialFeatures], market: &[MarketDay]) -> Result<Vec<FusedWindow>, ScoringError> {
    let Some(first) = market.first() else {
        return Ok(Vec::new());
    };
    let ticker = first.ticker.as_str();
    if let Some(m) = market.iter().find(|m| m.ticker != ticker) {
        return Err(ScoringError::TickerMismatch {
            expected: ticker.to_string(),
            found: m.ticker.clone(),
        });
    }
    if let Some(s) = social.iter().find(|s| s.ticker != ticker) {
        return Err(ScoringError::TickerMismatch {
            expected: ticker.to_string(),
            found: s.ticker.clone(),
        });
    }
    if !market.windows(2).all(|w| w[0].date < w[1].date) {
        return Err(ScoringError::UnorderedInput(ticker.to_string()));
    }
    let by_date: HashMap<NaiveDate, &DailySocialFeatures> = social.iter().map(|s| (s.date, s)).collect();
    let dropped = social
        .iter()
        .filter(|s| market.binary_search_by_key(&s.date, |m| m.date).is_err())
        .count();
    if dropped > 0 {
        log::warn!("{ticker}: {dropped} social rows fall on non-market days and were dropped");
    }
    Ok(market
        .iter()
        .map(|m| FusedWindow::new(m, by_date.get(&m.date).copied()))
        .collect())
}
