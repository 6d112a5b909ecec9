//! Returns and trailing volume statistics from daily bars.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::store::{col, ColumnDef, ColumnType, Stage, StageRow};
use crate::ingest::OhlcvBar;

/// Volume z-score at or above which a day is flagged anomalous.
pub const VOLUME_ANOMALY_Z: f64 = 2.0;

#[derive(Debug, Error, PartialEq)]
pub enum MarketError {
    #[error("non-positive previous close {prev_close}")]
    NonPositivePrice { prev_close: f64 },
    #[error("bars must be non-empty, for one ticker and in strictly increasing date order")]
    InvalidBars,
    #[error("invalid rolling parameters: window {window}, min_periods {min_periods}")]
    InvalidParams { window: usize, min_periods: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RollingParams {
    pub window: usize,
    pub min_periods: usize,
}

impl Default for RollingParams {
    fn default() -> Self {
        Self {
            window: 20,
            min_periods: 5,
        }
    }
}

impl RollingParams {
    pub fn validate(&self) -> Result<(), MarketError> {
        if self.min_periods >= 1 && self.min_periods <= self.window {
            Ok(())
        } else {
            Err(MarketError::InvalidParams {
                window: self.window,
                min_periods: self.min_periods,
            })
        }
    }
}

pub fn compute_return(prev_close: f64, close: f64) -> Result<f64, MarketError> {
    if prev_close.is_nan() || prev_close <= 0.0 {
        return Err(MarketError::NonPositivePrice { prev_close });
    }
    Ok((close - prev_close) / prev_close)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RollingStat {
    pub mean: f64,
    pub std: f64,
    pub zscore: f64,
}

/// Mean and population standard deviation of the window ending at and
/// including each day. The z-score is 0 in warm-up and when std is 0.
pub fn rolling_volume_stats(volumes: &[f64], p: &RollingParams) -> Vec<RollingStat> {
    (0..volumes.len())
        .map(|t| {
            let lo = (t + 1).saturating_sub(p.window);
            let w = &volumes[lo..=t];
            let n = w.len() as f64;
            let mean = w.iter().sum::<f64>() / n;
            let std = (w.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt();
            let zscore = if w.len() < p.min_periods || std == 0.0 {
                0.0
            } else {
                (volumes[t] - mean) / std
            };
            RollingStat { mean, std, zscore }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DailyMarketFeatures {
    pub ticker: String,
    pub date: NaiveDate,
    #[serde(rename = "return")]
    pub daily_return: f64,
    pub volume_mean: f64,
    pub volume_std: f64,
    pub volume_zscore: f64,
    pub is_volume_anomaly: bool,
}

fn check_bars(bars: &[OhlcvBar]) -> Result<(), MarketError> {
    let Some(first) = bars.first() else {
        return Err(MarketError::InvalidBars);
    };
    let ok = bars.iter().all(|b| b.ticker == first.ticker) && bars.windows(2).all(|w| w[0].date < w[1].date);
    if ok {
        Ok(())
    } else {
        Err(MarketError::InvalidBars)
    }
}

pub fn market_feature_table(bars: &[OhlcvBar], p: &RollingParams) -> Result<Vec<DailyMarketFeatures>, MarketError> {
    p.validate()?;
    check_bars(bars)?;
    let volumes: Vec<f64> = bars.iter().map(|b| b.volume).collect();
    let stats = rolling_volume_stats(&volumes, p);
    let mut out = Vec::with_capacity(bars.len());
    for (i, (bar, s)) in bars.iter().zip(stats).enumerate() {
        let daily_return = if i == 0 {
            0.0
        } else {
            compute_return(bars[i - 1].close, bar.close)?
        };
        out.push(DailyMarketFeatures {
            ticker: bar.ticker.clone(),
            date: bar.date,
            daily_return,
            volume_mean: s.mean,
            volume_std: s.std,
            volume_zscore: s.zscore,
            is_volume_anomaly: s.zscore >= VOLUME_ANOMALY_Z,
        });
    }
    Ok(out)
}

/// One persisted market-stage row: the bar and its derived features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarketDay {
    pub ticker: String,
    pub date: NaiveDate,
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
}

impl MarketDay {
    pub fn new(bar: &OhlcvBar, f: &DailyMarketFeatures) -> Self {
        Self {
            ticker: bar.ticker.clone(),
            date: bar.date,
            open: bar.open,
            high: bar.high,
            low: bar.low,
            close: bar.close,
            adj_close: bar.adj_close,
            volume: bar.volume,
            daily_return: f.daily_return,
            volume_mean: f.volume_mean,
            volume_std: f.volume_std,
            volume_zscore: f.volume_zscore,
            is_volume_anomaly: f.is_volume_anomaly,
        }
    }
}

pub(crate) const MARKET_COLUMNS: [ColumnDef; 13] = [
    col("ticker", ColumnType::Str),
    col("date", ColumnType::Date),
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
];

impl StageRow for MarketDay {
    const STAGE: Stage = Stage::Market;
    fn schema() -> Vec<ColumnDef> {
        MARKET_COLUMNS.to_vec()
    }
}

/// Bars joined with their features, one [`MarketDay`] per bar.
pub fn market_days(bars: &[OhlcvBar], p: &RollingParams) -> Result<Vec<MarketDay>, MarketError> {
    let features = market_feature_table(bars, p)?;
    Ok(bars.iter().zip(&features).map(|(b, f)| MarketDay::new(b, f)).collect())
}
