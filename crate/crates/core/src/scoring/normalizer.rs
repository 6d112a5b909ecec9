//! Causal expanding-window scaling.
//!
//! Each observation is log-transformed (`y = ln(1 + raw)`) and added to the
//! history before scoring, then mapped to
//! `clamp((y - min) / (p99 - min + eps), 0, 1)` where `min` and `p99` are the
//! exact minimum and 99th percentile (linear interpolation) of all history
//! up to and including today.

use crate::stats::percentile_sorted;

pub const DEFAULT_EPSILON: f64 = 1e-9;
pub const UPPER_QUANTILE: f64 = 0.99;

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizerState {
    sorted: Vec<f64>,
    epsilon: f64,
}

impl Default for NormalizerState {
    fn default() -> Self {
        Self::new(DEFAULT_EPSILON)
    }
}

impl NormalizerState {
    pub fn new(epsilon: f64) -> Self {
        Self {
            sorted: Vec::new(),
            epsilon,
        }
    }

    pub fn count(&self) -> usize {
        self.sorted.len()
    }

    pub fn min(&self) -> Option<f64> {
        self.sorted.first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.sorted.last().copied()
    }

    /// 99th percentile of the log-transformed history.
    pub fn p99(&self) -> Option<f64> {
        (!self.sorted.is_empty()).then(|| percentile_sorted(&self.sorted, UPPER_QUANTILE))
    }

    /// Adds one raw observation. Negative inputs are treated as 0.
    pub fn update(&mut self, raw: f64) {
        let y = transform(raw);
        let at = self.sorted.partition_point(|v| *v <= y);
        self.sorted.insert(at, y);
    }

    /// Adds `raw` to the history and returns its normalized value.
    pub fn observe(&mut self, raw: f64) -> f64 {
        self.update(raw);
        normalize_expanding(raw, self)
    }
}

fn transform(raw: f64) -> f64 {
    raw.max(0.0).ln_1p()
}

/// Scales `raw` against `state`, which must already include the current day.
/// An empty state scores 0.
pub fn normalize_expanding(raw: f64, state: &NormalizerState) -> f64 {
    let (Some(min), Some(p99)) = (state.min(), state.p99()) else {
        return 0.0;
    };
    let y = transform(raw);
    ((y - min) / (p99 - min + state.epsilon)).clamp(0.0, 1.0)
}
