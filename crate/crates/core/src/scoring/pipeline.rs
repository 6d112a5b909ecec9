//! The single causal scoring pass over a ticker's fused windows.

use serde::{Deserialize, Serialize};

use super::amrs::{
    market_component, risk_level, supporting_anomalies, weighted_score, Anomaly, AnomalyInputs, Components,
    RiskLevel, SuspicionParams, WeightConfig,
};
use super::fusion::{FusedWindow, FUSED_COLUMNS};
use super::normalizer::{NormalizerState, DEFAULT_EPSILON};
use super::ScoringError;
use crate::ingest::store::{col, ColumnDef, ColumnType, Stage, StageRow};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScoringConfig {
    pub weights: WeightConfig,
    pub suspicion: SuspicionParams,
    pub epsilon: f64,
}

impl Default for ScoringConfig {
    fn default() -> Self {
        Self {
            weights: WeightConfig::default(),
            suspicion: SuspicionParams::default(),
            epsilon: DEFAULT_EPSILON,
        }
    }
}

/// A fused window with its component scores, AMRS and tags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredWindow {
    #[serde(flatten)]
    pub window: FusedWindow,
    pub s_vol: f64,
    pub s_sent: f64,
    pub s_bot: f64,
    pub s_coord: f64,
    pub s_mkt: f64,
    pub risk_score: f64,
    pub risk_level: RiskLevel,
    pub is_suspicious: bool,
    /// Supporting conditions that fired on this day, whatever the risk level.
    pub supporting_anomalies: Vec<Anomaly>,
}

impl ScoredWindow {
    pub fn components(&self) -> Components {
        Components {
            s_vol: self.s_vol,
            s_sent: self.s_sent,
            s_bot: self.s_bot,
            s_coord: self.s_coord,
            s_mkt: self.s_mkt,
        }
    }
}

impl StageRow for ScoredWindow {
    const STAGE: Stage = Stage::Scored;
    fn schema() -> Vec<ColumnDef> {
        let mut cols = FUSED_COLUMNS.to_vec();
        cols.extend([
            col("s_vol", ColumnType::F64),
            col("s_sent", ColumnType::F64),
            col("s_bot", ColumnType::F64),
            col("s_coord", ColumnType::F64),
            col("s_mkt", ColumnType::F64),
            col("risk_score", ColumnType::F64),
            col("risk_level", ColumnType::Str),
            col("is_suspicious", ColumnType::Bool),
            col("supporting_anomalies", ColumnType::StrList),
        ]);
        cols
    }
}

/// Expanding normalizers for the six raw channels of one ticker.
#[derive(Debug, Clone)]
pub struct ComponentNormalizers {
    vol: NormalizerState,
    sent: NormalizerState,
    bot: NormalizerState,
    coord: NormalizerState,
    zscore: NormalizerState,
    abs_return: NormalizerState,
}

impl ComponentNormalizers {
    pub fn new(epsilon: f64) -> Self {
        let s = NormalizerState::new(epsilon);
        Self {
            vol: s.clone(),
            sent: s.clone(),
            bot: s.clone(),
            coord: s.clone(),
            zscore: s.clone(),
            abs_return: s,
        }
    }

    /// Folds one day into the history and returns its components.
    pub fn observe(&mut self, w: &FusedWindow) -> Components {
        let z = self.zscore.observe(w.volume_zscore.max(0.0));
        let r = self.abs_return.observe(w.daily_return.abs());
        Components {
            s_vol: self.vol.observe(w.social_volume as f64),
            s_sent: self.sent.observe(w.avg_sentiment.max(0.0)),
            s_bot: self.bot.observe(w.bot_heavy_post_ratio),
            s_coord: self.coord.observe(w.coordination_score),
            s_mkt: market_component(z, r),
        }
    }
}

fn check_series(fused: &[FusedWindow]) -> Result<(), ScoringError> {
    let Some(first) = fused.first() else {
        return Ok(());
    };
    if let Some(w) = fused.iter().find(|w| w.ticker != first.ticker) {
        return Err(ScoringError::TickerMismatch {
            expected: first.ticker.clone(),
            found: w.ticker.clone(),
        });
    }
    if !fused.windows(2).all(|p| p[0].date < p[1].date) {
        return Err(ScoringError::UnorderedInput(first.ticker.clone()));
    }
    Ok(())
}

/// Scores `fused` (one ticker, ascending dates) in one forward pass. Row `t`
/// depends only on rows `0..=t`.
pub fn score_pipeline(fused: &[FusedWindow], cfg: &ScoringConfig) -> Result<Vec<ScoredWindow>, ScoringError> {
    cfg.weights.validate()?;
    check_series(fused)?;
    let mut norms = ComponentNormalizers::new(cfg.epsilon);
    Ok(fused
        .iter()
        .map(|w| {
            let c = norms.observe(w);
            let risk_score = weighted_score(&c, &cfg.weights);
            let level = risk_level(risk_score);
            let fired = supporting_anomalies(
                &AnomalyInputs {
                    volume_zscore: w.volume_zscore,
                    daily_return: w.daily_return,
                    coordination_score: w.coordination_score,
                    bot_heavy_post_ratio: w.bot_heavy_post_ratio,
                },
                &cfg.suspicion,
            );
            ScoredWindow {
                window: w.clone(),
                s_vol: c.s_vol,
                s_sent: c.s_sent,
                s_bot: c.s_bot,
                s_coord: c.s_coord,
                s_mkt: c.s_mkt,
                risk_score,
                risk_level: level,
                is_suspicious: level == RiskLevel::High && !fired.is_empty(),
                supporting_anomalies: fired,
            }
        })
        .collect())
}

/// Re-weights already computed components. Components do not depend on the
/// weights, so this equals re-running the pipeline with `w`.
pub fn rescore(scored: &[ScoredWindow], w: &WeightConfig) -> Vec<f64> {
    scored.iter().map(|s| weighted_score(&s.components(), w)).collect()
}
