//! Component ablations: drop or isolate components, renormalize the
//! remaining weights and summarize the re-weighted score series.

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::scoring::{rescore, Component, ScoredWindow, WeightConfig};
use crate::stats::{mean, population_std};

pub const FULL_MODEL: &str = "Full Model";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AblationSpec {
    pub name: String,
    /// Components kept; everything else gets weight 0.
    pub keep: Vec<Component>,
}

impl AblationSpec {
    pub fn new(name: &str, keep: &[Component]) -> Self {
        Self {
            name: name.to_string(),
            keep: keep.to_vec(),
        }
    }

    pub fn removing(name: &str, remove: &[Component]) -> Self {
        let keep: Vec<_> = Component::ALL.into_iter().filter(|c| !remove.contains(c)).collect();
        Self::new(name, &keep)
    }

    /// A spec from component names such as `["vol", "sent"]`.
    pub fn from_names(name: &str, keep: &[&str]) -> Result<Self, EvalError> {
        let keep = keep
            .iter()
            .map(|s| s.parse::<Component>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(name, &keep))
    }
}

/// The full model, each single-component removal, and three category
/// isolations.
pub fn standard_ablations() -> Vec<AblationSpec> {
    use Component::*;
    vec![
        AblationSpec::new(FULL_MODEL, &Component::ALL),
        AblationSpec::removing("No Social Volume", &[Vol]),
        AblationSpec::removing("No Sentiment", &[Sent]),
        AblationSpec::removing("No Bot Detection", &[Bot]),
        AblationSpec::removing("No Coordination", &[Coord]),
        AblationSpec::removing("No Market Signals", &[Mkt]),
        AblationSpec::new("Social Only (Vol+Sent)", &[Vol, Sent]),
        AblationSpec::new("Market Only", &[Mkt]),
        AblationSpec::new("Manipulation Signals Only", &[Bot, Coord]),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationSummary {
    pub configuration: String,
    pub mean_score: f64,
    pub std_dev: f64,
    pub max_score: f64,
    pub high_risk_days: usize,
    /// `100 · (mean − mean_full) / mean_full`; absent for the full model
    /// itself and when the full mean is 0.
    pub delta_pct: Option<f64>,
}

fn summarize(name: &str, scores: &[f64], high: f64) -> AblationSummary {
    AblationSummary {
        configuration: name.to_string(),
        mean_score: mean(scores),
        std_dev: population_std(scores),
        max_score: scores.iter().copied().fold(0.0, f64::max),
        high_risk_days: scores.iter().filter(|&&s| s >= high).count(),
        delta_pct: None,
    }
}

/// Runs every spec over `scored` (already restricted to the window of
/// interest). The full model is always the first row.
pub fn ablation_run(
    scored: &[ScoredWindow],
    base: &WeightConfig,
    specs: &[AblationSpec],
    high_risk_threshold: f64,
) -> Result<Vec<AblationSummary>, EvalError> {
    base.validate()?;
    let full = summarize(FULL_MODEL, &rescore(scored, base), high_risk_threshold);
    let mut out = vec![full.clone()];
    for spec in specs.iter().filter(|s| s.name != FULL_MODEL) {
        let w = base.only(&spec.keep)?;
        let mut row = summarize(&spec.name, &rescore(scored, &w), high_risk_threshold);
        if full.mean_score != 0.0 {
            row.delta_pct = Some(100.0 * (row.mean_score - full.mean_score) / full.mean_score);
        }
        out.push(row);
    }
    Ok(out)
}
