//! Fixed-format CSV report tables.
//!
//! Reals are written with six decimals so reports are byte-stable.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ablation::AblationSummary;
use super::baselines::MethodSummary;
use super::lead_time::LeadTimeRecord;
use super::metrics::{ForwardEvalRow, MetricsReport};
use super::sensitivity::SensitivityRow;
use super::EvalError;

/// A header and pre-formatted cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub fn fmt6(x: f64) -> String {
    format!("{x:.6}")
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    pub fn write(&self, path: &Path) -> Result<(), EvalError> {
        let io = |source| EvalError::StorageFailure {
            path: path.to_path_buf(),
            source,
        };
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(io)?;
        }
        fs::write(path, self.to_csv()).map_err(io)
    }

    pub fn read(path: &Path) -> Result<Self, EvalError> {
        let mut r = csv::Reader::from_path(path).map_err(|e| EvalError::Csv {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let csv_err = |e: csv::Error| EvalError::Csv {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        let columns = r.headers().map_err(csv_err)?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(rec.map_err(csv_err)?.iter().map(String::from).collect());
        }
        Ok(Self { columns, rows })
    }
}

pub fn forward_walk_table(rows: &[ForwardEvalRow]) -> Table {
    let mut t = Table::new(&["ticker", "date", "true_label", "predicted_label", "risk_score"]);
    for r in rows {
        t.push(vec![
            r.ticker.clone(),
            r.date.to_string(),
            r.true_label.to_string(),
            r.predicted_label.to_string(),
            fmt6(r.risk_score),
        ]);
    }
    t
}

/// Confusion counts and ranking metrics at one threshold.
pub fn metrics_table(label: &str, m: &MetricsReport) -> Table {
    let mut t = Table::new(&["model", "threshold", "tp", "fp", "tn", "fn", "roc_auc", "pr_auc"]);
    t.push(vec![
        label.to_string(),
        format!("{:.2}", m.threshold),
        m.tp.to_string(),
        m.fp.to_string(),
        m.tn.to_string(),
        m.fn_.to_string(),
        fmt6(m.roc_auc),
        fmt6(m.pr_auc),
    ]);
    t
}

pub fn threshold_table(reports: &[MetricsReport]) -> Table {
    let mut t = Table::new(&["threshold", "tp", "fp", "tn", "fn", "precision", "recall", "f1"]);
    for m in reports {
        t.push(vec![
            format!("{:.2}", m.threshold),
            m.tp.to_string(),
            m.fp.to_string(),
            m.tn.to_string(),
            m.fn_.to_string(),
            fmt6(m.precision),
            fmt6(m.recall),
            fmt6(m.f1),
        ]);
    }
    t
}

pub fn lead_time_table(records: &[LeadTimeRecord]) -> Table {
    let mut t = Table::new(&[
        "ticker",
        "event_id",
        "event_start_date",
        "first_alert_date",
        "lead_time_days",
        "detected_pre_event",
        "max_risk_pre_event",
    ]);
    for r in records {
        t.push(vec![
            r.ticker.clone(),
            r.event_id.clone(),
            r.event_start_date.to_string(),
            opt(r.first_alert_date),
            opt(r.lead_time_days),
            r.detected_pre_event.to_string(),
            fmt6(r.max_risk_pre_event),
        ]);
    }
    t
}

pub fn ablation_table(rows: &[AblationSummary]) -> Table {
    let mut t = Table::new(&[
        "configuration",
        "mean_score",
        "std_dev",
        "max_score",
        "high_risk_days",
        "delta_from_full_pct",
    ]);
    for r in rows {
        t.push(vec![
            r.configuration.clone(),
            fmt6(r.mean_score),
            fmt6(r.std_dev),
            fmt6(r.max_score),
            r.high_risk_days.to_string(),
            r.delta_pct.map(fmt6).unwrap_or_default(),
        ]);
    }
    t
}

pub fn baseline_table(rows: &[MethodSummary]) -> Table {
    let mut t = Table::new(&[
        "method",
        "roc_auc",
        "pr_auc",
        "precision",
        "recall",
        "f1",
        "high_risk_days",
        "early_detection_days",
    ]);
    for r in rows {
        t.push(vec![
            r.method.clone(),
            fmt6(r.roc_auc),
            fmt6(r.pr_auc),
            fmt6(r.precision),
            fmt6(r.recall),
            fmt6(r.f1),
            r.high_risk_days.to_string(),
            opt(r.early_detection_days),
        ]);
    }
    t
}

pub fn sensitivity_table(rows: &[SensitivityRow]) -> Table {
    let mut t = Table::new(&[
        "config_id",
        "w_vol",
        "w_sent",
        "w_bot",
        "w_coord",
        "w_mkt",
        "spearman",
        "roc_auc",
    ]);
    for r in rows {
        let w = &r.weights;
        t.push(vec![
            r.config_id.clone(),
            fmt6(w.w_vol),
            fmt6(w.w_sent),
            fmt6(w.w_bot),
            fmt6(w.w_coord),
            fmt6(w.w_mkt),
            fmt6(r.spearman),
            r.roc_auc.map(fmt6).unwrap_or_default(),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["x, y".into(), fmt6(1.0 / 3.0)]);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r/t.csv");
        t.write(&p).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "a,b\n\"x, y\",0.333333\n");
        assert_eq!(Table::read(&p).unwrap(), t);
    }
}
