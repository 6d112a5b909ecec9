//! Confusion counts, threshold metrics and ranking AUCs.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

/// One labeled, scored ticker-day.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForwardEvalRow {
    pub ticker: String,
    pub date: NaiveDate,
    pub true_label: u8,
    pub predicted_label: u8,
    pub risk_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub threshold: f64,
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub roc_auc: f64,
    pub pr_auc: f64,
}

impl MetricsReport {
    pub fn alerts(&self) -> usize {
        self.tp + self.fp
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Score groups in descending order: `(positives, negatives)` per distinct score.
fn descending_groups(scores: &[f64], labels: &[bool]) -> Vec<(usize, usize)> {
    assert_eq!(scores.len(), labels.len(), "scores and labels differ in length");
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut groups: Vec<(usize, usize)> = Vec::new();
    let mut last: Option<f64> = None;
    for i in idx {
        if last != Some(scores[i]) {
            groups.push((0, 0));
            last = Some(scores[i]);
        }
        let g = groups.last_mut().expect("group pushed");
        if labels[i] {
            g.0 += 1;
        } else {
            g.1 += 1;
        }
    }
    groups
}

/// Area under the ROC curve with the trapezoid rule over distinct score
/// thresholds (ties count one half). A single-class input gives 0.5.
pub fn roc_auc(scores: &[f64], labels: &[bool]) -> f64 {
    let pos = labels.iter().filter(|&&l| l).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return 0.5;
    }
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut area = 0.0;
    for (gp, gn) in descending_groups(scores, labels) {
        // Trapezoid between (fp, tp) and (fp + gn, tp + gp) in count units.
        area += gn as f64 * (2 * tp + gp) as f64 / 2.0;
        tp += gp;
        fp += gn;
    }
    debug_assert_eq!((tp, fp), (pos, neg));
    area / (pos as f64 * neg as f64)
}

/// Average precision: `Σ (R_k - R_{k-1}) · P_k` over distinct thresholds in
/// descending order. 0 when there are no positives.
pub fn pr_auc(scores: &[f64], labels: &[bool]) -> f64 {
    let pos = labels.iter().filter(|&&l| l).count();
    if pos == 0 {
        return 0.0;
    }
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut prev_recall = 0.0;
    let mut ap = 0.0;
    for (gp, gn) in descending_groups(scores, labels) {
        tp += gp;
        fp += gn;
        let recall = tp as f64 / pos as f64;
        let precision = tp as f64 / (tp + fp) as f64;
        ap += (recall - prev_recall) * precision;
        prev_recall = recall;
    }
    ap
}

/// Counts at `score >= threshold`, derived metrics, and threshold-free AUCs.
pub fn confusion_and_metrics(rows: &[ForwardEvalRow], threshold: f64) -> MetricsReport {
    let (mut tp, mut fp, mut tn, mut fn_) = (0, 0, 0, 0);
    for r in rows {
        match (r.true_label == 1, r.risk_score >= threshold) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (false, false) => tn += 1,
            (true, false) => fn_ += 1,
        }
    }
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    let scores: Vec<f64> = rows.iter().map(|r| r.risk_score).collect();
    let labels: Vec<bool> = rows.iter().map(|r| r.true_label == 1).collect();
    MetricsReport {
        threshold,
        tp,
        fp,
        tn,
        fn_,
        precision,
        recall,
        f1,
        roc_auc: roc_auc(&scores, &labels),
        pr_auc: pr_auc(&scores, &labels),
    }
}

pub const DEFAULT_SWEEP: [f64; 6] = [0.2, 0.3, 0.4, 0.5, 0.6, 0.7];

pub fn threshold_sweep(rows: &[ForwardEvalRow], thresholds: &[f64]) -> Vec<MetricsReport> {
    thresholds.iter().map(|&t| confusion_and_metrics(rows, t)).collect()
}
