//! Weight-perturbation stability of the daily score ranking.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::metrics::roc_auc;
use super::EvalError;
use crate::scoring::{rescore, Component, ScoredWindow, WeightConfig};
use crate::stats::spearman;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SensitivityParams {
    pub perturbation: f64,
    /// Total configurations: the single-weight sweeps plus a random grid.
    pub n_configs: usize,
    pub seed: u64,
}

impl Default for SensitivityParams {
    fn default() -> Self {
        Self {
            perturbation: 0.20,
            n_configs: 50,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityRow {
    pub config_id: String,
    pub weights: WeightConfig,
    pub spearman: f64,
    pub roc_auc: Option<f64>,
}

/// Perturbed, renormalized weight sets: `±p` on each weight alone, then
/// uniform multipliers in `[1 - p, 1 + p]` on all weights until `n_configs`.
pub fn perturbation_grid(base: &WeightConfig, p: &SensitivityParams) -> Result<Vec<(String, WeightConfig)>, EvalError> {
    let mut out = Vec::with_capacity(p.n_configs);
    for c in Component::ALL {
        for (sign, tag) in [(1.0, "+"), (-1.0, "-")] {
            let mut w = *base;
            w.set(c, base.get(c) * (1.0 + sign * p.perturbation));
            out.push((format!("{c}{tag}{:.0}%", 100.0 * p.perturbation), w.renormalized()?));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut k = 0;
    while out.len() < p.n_configs {
        let mut w = *base;
        for c in Component::ALL {
            let m: f64 = rng.random_range(1.0 - p.perturbation..=1.0 + p.perturbation);
            w.set(c, base.get(c) * m);
        }
        out.push((format!("random-{k:02}"), w.renormalized()?));
        k += 1;
    }
    out.truncate(p.n_configs.max(10));
    Ok(out)
}

/// Spearman correlation of each perturbed score series against the base
/// series, plus ROC-AUC over the labeled rows when `labels` is given as
/// `(row index, positive)` pairs.
pub fn weight_sensitivity(
    scored: &[ScoredWindow],
    base: &WeightConfig,
    p: &SensitivityParams,
    labels: Option<&[(usize, bool)]>,
) -> Result<Vec<SensitivityRow>, EvalError> {
    base.validate()?;
    let reference = rescore(scored, base);
    let auc = |scores: &[f64]| {
        labels.map(|l| {
            let s: Vec<f64> = l.iter().map(|&(i, _)| scores[i]).collect();
            let y: Vec<bool> = l.iter().map(|&(_, y)| y).collect();
            roc_auc(&s, &y)
        })
    };
    let mut rows = vec![SensitivityRow {
        config_id: "base".into(),
        weights: *base,
        spearman: spearman(&reference, &reference),
        roc_auc: auc(&reference),
    }];
    for (id, w) in perturbation_grid(base, p)? {
        let scores = rescore(scored, &w);
        rows.push(SensitivityRow {
            config_id: id,
            weights: w,
            spearman: spearman(&reference, &scores),
            roc_auc: auc(&scores),
        });
    }
    Ok(rows)
}
