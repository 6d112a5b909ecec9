//! The weighted risk score, risk levels and suspicious-window tagging.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ScoringError;

/// The five score components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    Vol,
    Sent,
    Bot,
    Coord,
    Mkt,
}

impl Component {
    pub const ALL: [Component; 5] = [
        Component::Vol,
        Component::Sent,
        Component::Bot,
        Component::Coord,
        Component::Mkt,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Component::Vol => "vol",
            Component::Sent => "sent",
            Component::Bot => "bot",
            Component::Coord => "coord",
            Component::Mkt => "mkt",
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Component {
    type Err = ScoringError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Component::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| ScoringError::UnknownComponent(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WeightConfig {
    pub w_vol: f64,
    pub w_sent: f64,
    pub w_bot: f64,
    pub w_coord: f64,
    pub w_mkt: f64,
}

impl Default for WeightConfig {
    fn default() -> Self {
        Self {
            w_vol: 0.25,
            w_sent: 0.15,
            w_bot: 0.20,
            w_coord: 0.20,
            w_mkt: 0.20,
        }
    }
}

pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-6;

impl WeightConfig {
    pub fn get(&self, c: Component) -> f64 {
        match c {
            Component::Vol => self.w_vol,
            Component::Sent => self.w_sent,
            Component::Bot => self.w_bot,
            Component::Coord => self.w_coord,
            Component::Mkt => self.w_mkt,
        }
    }

    pub fn set(&mut self, c: Component, w: f64) {
        match c {
            Component::Vol => self.w_vol = w,
            Component::Sent => self.w_sent = w,
            Component::Bot => self.w_bot = w,
            Component::Coord => self.w_coord = w,
            Component::Mkt => self.w_mkt = w,
        }
    }

    pub fn sum(&self) -> f64 {
        Component::ALL.iter().map(|&c| self.get(c)).sum()
    }

    pub fn validate(&self) -> Result<(), ScoringError> {
        if Component::ALL.iter().any(|&c| !(self.get(c).is_finite() && self.get(c) >= 0.0)) {
            return Err(ScoringError::InvalidWeights(format!("weights must be finite and >= 0: {self:?}")));
        }
        if (self.sum() - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(ScoringError::InvalidWeights(format!(
                "weights sum to {}, expected 1",
                self.sum()
            )));
        }
        Ok(())
    }

    /// Scales the weights to sum to 1.
    pub fn renormalized(&self) -> Result<Self, ScoringError> {
        let total = self.sum();
        if !(total.is_finite() && total > 0.0) {
            return Err(ScoringError::InvalidWeights(format!("cannot renormalize {self:?}")));
        }
        let mut out = *self;
        for c in Component::ALL {
            out.set(c, self.get(c) / total);
        }
        Ok(out)
    }

    /// Keeps only `keep`, renormalized.
    pub fn only(&self, keep: &[Component]) -> Result<Self, ScoringError> {
        let mut out = *self;
        for c in Component::ALL {
            if !keep.contains(&c) {
                out.set(c, 0.0);
            }
        }
        out.renormalized()
    }

    /// Drops `remove`, renormalized.
    pub fn without(&self, remove: &[Component]) -> Result<Self, ScoringError> {
        let keep: Vec<_> = Component::ALL.into_iter().filter(|c| !remove.contains(c)).collect();
        self.only(&keep)
    }
}

/// Normalized component scores, each in `[0, 1]`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Components {
    pub s_vol: f64,
    pub s_sent: f64,
    pub s_bot: f64,
    pub s_coord: f64,
    pub s_mkt: f64,
}

impl Components {
    pub fn get(&self, c: Component) -> f64 {
        match c {
            Component::Vol => self.s_vol,
            Component::Sent => self.s_sent,
            Component::Bot => self.s_bot,
            Component::Coord => self.s_coord,
            Component::Mkt => self.s_mkt,
        }
    }
}

/// Weighted component sum clipped to `[0, 1]`. Weights are not validated;
/// see [`amrs`].
pub fn weighted_score(c: &Components, w: &WeightConfig) -> f64 {
    let raw = w.w_vol * c.s_vol + w.w_sent * c.s_sent + w.w_bot * c.s_bot + w.w_coord * c.s_coord + w.w_mkt * c.s_mkt;
    raw.clamp(0.0, 1.0)
}

pub fn amrs(c: &Components, w: &WeightConfig) -> Result<f64, ScoringError> {
    w.validate()?;
    Ok(weighted_score(c, w))
}

/// Market component: the larger of the two normalized market channels.
pub fn market_component(volume_zscore_norm: f64, abs_return_norm: f64) -> f64 {
    volume_zscore_norm.max(abs_return_norm)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RiskLevel {
    Low,
    Medium,
    High,
}

impl RiskLevel {
    pub fn as_str(&self) -> &'static str {
        match self {
            RiskLevel::Low => "Low",
            RiskLevel::Medium => "Medium",
            RiskLevel::High => "High",
        }
    }
}

impl fmt::Display for RiskLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RiskLevel {
    type Err = ScoringError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "low" => Ok(RiskLevel::Low),
            "medium" => Ok(RiskLevel::Medium),
            "high" => Ok(RiskLevel::High),
            _ => Err(ScoringError::UnknownRiskLevel(s.to_string())),
        }
    }
}

pub const MEDIUM_RISK_FROM: f64 = 0.2;
pub const HIGH_RISK_FROM: f64 = 0.5;

pub fn risk_level(score: f64) -> RiskLevel {
    if score < MEDIUM_RISK_FROM {
        RiskLevel::Low
    } else if score < HIGH_RISK_FROM {
        RiskLevel::Medium
    } else {
        RiskLevel::High
    }
}

/// Cutoffs for the supporting-anomaly conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuspicionParams {
    pub volume_zscore_cut: f64,
    /// `|return|` strictly above this counts as a large move.
    pub large_return_cut: f64,
    pub coord_cut: f64,
    pub bot_cut: f64,
}

impl Default for SuspicionParams {
    fn default() -> Self {
        Self {
            volume_zscore_cut: 2.0,
            large_return_cut: 0.05,
            coord_cut: 0.5,
            bot_cut: 0.3,
        }
    }
}

/// A supporting condition that can back a suspicious-window tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anomaly {
    VolumeAnomaly,
    LargeReturn,
    HighCoordination,
    BotHeavy,
}

impl Anomaly {
    pub fn as_str(&self) -> &'static str {
        match self {
            Anomaly::VolumeAnomaly => "volume_anomaly",
            Anomaly::LargeReturn => "large_return",
            Anomaly::HighCoordination => "high_coordination",
            Anomaly::BotHeavy => "bot_heavy",
        }
    }
}

/// Raw features the suspicion conditions look at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnomalyInputs {
    pub volume_zscore: f64,
    pub daily_return: f64,
    pub coordination_score: f64,
    pub bot_heavy_post_ratio: f64,
}

/// Conditions that fire, in a fixed order.
pub fn supporting_anomalies(x: &AnomalyInputs, p: &SuspicionParams) -> Vec<Anomaly> {
    let mut out = Vec::new();
    if x.volume_zscore >= p.volume_zscore_cut {
        out.push(Anomaly::VolumeAnomaly);
    }
    if x.daily_return.abs() > p.large_return_cut {
        out.push(Anomaly::LargeReturn);
    }
    if x.coordination_score >= p.coord_cut {
        out.push(Anomaly::HighCoordination);
    }
    if x.bot_heavy_post_ratio >= p.bot_cut {
        out.push(Anomaly::BotHeavy);
    }
    out
}

/// High risk backed by at least one supporting anomaly.
pub fn tag_suspicious(level: RiskLevel, x: &AnomalyInputs, p: &SuspicionParams) -> bool {
    level == RiskLevel::High && !supporting_anomalies(x, p).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comps(v: [f64; 5]) -> Components {
        Components {
            s_vol: v[0],
            s_sent: v[1],
            s_bot: v[2],
            s_coord: v[3],
            s_mkt: v[4],
        }
    }

    fn calm() -> AnomalyInputs {
        AnomalyInputs {
            volume_zscore: 0.0,
            daily_return: 0.0,
            coordination_score: 0.0,
            bot_heavy_post_ratio: 0.0,
        }
    }

    #[test]
    fn amrs_examples() {
        let w = WeightConfig::default();
        assert_eq!(amrs(&comps([1.0; 5]), &w).unwrap(), 1.0);
        assert_eq!(amrs(&comps([0.0; 5]), &w).unwrap(), 0.0);
        assert_eq!(amrs(&comps([1.0, 0.0, 0.0, 0.0, 0.0]), &w).unwrap(), 0.25);
        let bad = WeightConfig {
            w_vol: 0.5,
            ..WeightConfig::default()
        };
        assert!(matches!(amrs(&comps([0.0; 5]), &bad), Err(ScoringError::InvalidWeights(_))));
    }

    #[test]
    fn risk_level_boundaries() {
        assert_eq!(risk_level(0.19), RiskLevel::Low);
        assert_eq!(risk_level(0.2), RiskLevel::Medium);
        assert_eq!(risk_level(0.4999), RiskLevel::Medium);
        assert_eq!(risk_level(0.5), RiskLevel::High);
        assert_eq!(risk_level(0.0), RiskLevel::Low);
        assert!(RiskLevel::Low < RiskLevel::Medium && RiskLevel::Medium < RiskLevel::High);
    }

    #[test]
    fn market_component_examples() {
        assert_eq!(market_component(0.9, 0.1), 0.9);
        assert_eq!(market_component(0.0, 0.0), 0.0);
        assert_eq!(market_component(0.0, 0.7), 0.7);
    }

    #[test]
    fn suspicion_examples() {
        let p = SuspicionParams::default();
        let spike = AnomalyInputs {
            volume_zscore: 2.5,
            ..calm()
        };
        assert!(tag_suspicious(RiskLevel::High, &spike, &p));
        assert!(!tag_suspicious(RiskLevel::High, &calm(), &p));
        let big = AnomalyInputs {
            volume_zscore: 3.0,
            ..calm()
        };
        assert!(!tag_suspicious(RiskLevel::Medium, &big, &p));
        let all = AnomalyInputs {
            volume_zscore: 2.0,
            daily_return: -0.06,
            coordination_score: 0.5,
            bot_heavy_post_ratio: 0.3,
        };
        assert_eq!(
            supporting_anomalies(&all, &p),
            vec![
                Anomaly::VolumeAnomaly,
                Anomaly::LargeReturn,
                Anomaly::HighCoordination,
                Anomaly::BotHeavy
            ]
        );
        let edge = AnomalyInputs {
            daily_return: 0.05,
            ..calm()
        };
        assert!(supporting_anomalies(&edge, &p).is_empty());
    }

    #[test]
    fn ablation_weights() {
        let w = WeightConfig::default();
        let no_coord = w.without(&[Component::Coord]).unwrap();
        assert_eq!(no_coord.w_coord, 0.0);
        assert!((no_coord.sum() - 1.0).abs() < 1e-12);
        assert!((no_coord.w_vol - 0.25 / 0.8).abs() < 1e-12);
        let mkt = w.only(&[Component::Mkt]).unwrap();
        assert_eq!(mkt.w_mkt, 1.0);
        assert!(w.only(&[]).is_err());
        assert_eq!("coord".parse::<Component>().unwrap(), Component::Coord);
        assert!("foo".parse::<Component>().is_err());
    }
}
