//! Append-only JSON-lines prediction log, prospective replay, and the
//! label join.

use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, NaiveDate, TimeZone, Utc};
use serde::{Deserialize, Serialize};

use super::metrics::ForwardEvalRow;
use super::EvalError;
use crate::ingest::GroundTruthLabel;
use crate::scoring::{score_pipeline, FusedWindow, ScoredWindow, ScoringConfig};

/// Hour (UTC) at which a trading day is considered closed; 16:00 New York
/// during standard time, so no prediction for day `t` can be logged earlier.
pub const TRADING_DAY_END_HOUR_UTC: u32 = 21;

pub fn trading_day_end(date: NaiveDate) -> DateTime<Utc> {
    Utc.from_utc_datetime(&date.and_hms_opt(TRADING_DAY_END_HOUR_UTC, 0, 0).expect("valid hour"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionLogEntry {
    pub timestamp: DateTime<Utc>,
    pub date: NaiveDate,
    pub ticker: String,
    pub risk_score: f64,
    pub predicted_label: u8,
    pub model_version: String,
    pub run_id: String,
    /// Free-form debugging metadata; must be a valid JSON document.
    pub extra: String,
}

impl PredictionLogEntry {
    pub fn validate(&self) -> Result<(), EvalError> {
        serde_json::from_str::<serde_json::Value>(&self.extra)
            .map_err(|e| EvalError::MalformedExtra(e.to_string()))?;
        if self.timestamp < trading_day_end(self.date) {
            return Err(EvalError::PrematureTimestamp {
                ticker: self.ticker.clone(),
                date: self.date,
                timestamp: self.timestamp,
            });
        }
        if !(0.0..=1.0).contains(&self.risk_score) || self.predicted_label > 1 {
            return Err(EvalError::InvalidEntry(format!(
                "{} {}: risk_score {} / predicted_label {}",
                self.ticker, self.date, self.risk_score, self.predicted_label
            )));
        }
        Ok(())
    }
}

/// Single-writer handle on a JSON-lines log. Entries must arrive in
/// non-decreasing timestamp order.
#[derive(Debug)]
pub struct PredictionLog {
    path: PathBuf,
    last_timestamp: Option<DateTime<Utc>>,
}

impl PredictionLog {
    /// Opens (creating if needed) the log at `path`, validating existing lines.
    pub fn open(path: impl Into<PathBuf>) -> Result<Self, EvalError> {
        let path = path.into();
        let last_timestamp = if path.exists() {
            Self::read(&path)?.last().map(|e| e.timestamp)
        } else {
            if let Some(dir) = path.parent() {
                fs::create_dir_all(dir).map_err(|source| EvalError::StorageFailure {
                    path: dir.to_path_buf(),
                    source,
                })?;
            }
            None
        };
        Ok(Self { path, last_timestamp })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Timestamp of the newest entry, if any.
    pub fn last_timestamp(&self) -> Option<DateTime<Utc>> {
        self.last_timestamp
    }

    pub fn append(&mut self, entry: &PredictionLogEntry) -> Result<(), EvalError> {
        self.append_all(std::slice::from_ref(entry))
    }

    /// Validates every entry first, then appends them in one write.
    pub fn append_all(&mut self, entries: &[PredictionLogEntry]) -> Result<(), EvalError> {
        let mut last = self.last_timestamp;
        let mut buf = Vec::new();
        for e in entries {
            e.validate()?;
            if let Some(prev) = last {
                if e.timestamp < prev {
                    return Err(EvalError::OutOfOrder {
                        previous: prev,
                        timestamp: e.timestamp,
                    });
                }
            }
            last = Some(e.timestamp);
            serde_json::to_writer(&mut buf, e).map_err(|e| EvalError::InvalidEntry(e.to_string()))?;
            buf.push(b'\n');
        }
        let io = |source| EvalError::StorageFailure {
            path: self.path.clone(),
            source,
        };
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path).map_err(io)?;
        f.write_all(&buf).map_err(io)?;
        f.sync_data().map_err(io)?;
        self.last_timestamp = last;
        Ok(())
    }

    /// All entries in file order.
    pub fn read(path: &Path) -> Result<Vec<PredictionLogEntry>, EvalError> {
        let io = |source| EvalError::StorageFailure {
            path: path.to_path_buf(),
            source,
        };
        let f = fs::File::open(path).map_err(io)?;
        let mut out = Vec::new();
        for (i, line) in BufReader::new(f).lines().enumerate() {
            let line = line.map_err(io)?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: PredictionLogEntry = serde_json::from_str(&line).map_err(|e| EvalError::MalformedLogLine {
                path: path.to_path_buf(),
                line: i + 1,
                reason: e.to_string(),
            })?;
            out.push(entry);
        }
        Ok(out)
    }
}

/// Inner join on `(ticker, date)`; among duplicate log entries the latest
/// timestamp wins (later lines win exact ties). Rows follow label order
/// sorted by `(ticker, date)`.
pub fn join_log_with_labels(entries: &[PredictionLogEntry], labels: &[GroundTruthLabel]) -> Vec<ForwardEvalRow> {
    let mut latest: HashMap<(&str, NaiveDate), &PredictionLogEntry> = HashMap::new();
    for e in entries {
        let key = (e.ticker.as_str(), e.date);
        match latest.get(&key) {
            Some(prev) if prev.timestamp > e.timestamp => {}
            _ => {
                latest.insert(key, e);
            }
        }
    }
    let mut sorted: Vec<&GroundTruthLabel> = labels.iter().collect();
    sorted.sort_by(|a, b| (&a.ticker, a.date).cmp(&(&b.ticker, b.date)));
    sorted
        .into_iter()
        .filter_map(|l| {
            latest.get(&(l.ticker.as_str(), l.date)).map(|e| ForwardEvalRow {
                ticker: l.ticker.clone(),
                date: l.date,
                true_label: l.label,
                predicted_label: e.predicted_label,
                risk_score: e.risk_score,
            })
        })
        .collect()
}

/// Settings for a simulated daily logging job.
#[derive(Debug, Clone, PartialEq)]
pub struct ProspectiveConfig {
    pub threshold: f64,
    pub model_version: String,
    pub run_id: String,
    /// Rows of history the job scores with; `None` uses all history.
    pub history_days: Option<usize>,
    pub from: Option<NaiveDate>,
    pub to: Option<NaiveDate>,
}

fn extra_json(s: &ScoredWindow, history_rows: usize) -> String {
    serde_json::json!({
        "history_rows": history_rows,
        "risk_level": s.risk_level,
        "is_suspicious": s.is_suspicious,
        "supporting_anomalies": s.supporting_anomalies,
        "components": {
            "s_vol": s.s_vol,
            "s_sent": s.s_sent,
            "s_bot": s.s_bot,
            "s_coord": s.s_coord,
            "s_mkt": s.s_mkt,
        },
    })
    .to_string()
}

/// Replays a daily job over one ticker: at the close of each day in range it
/// scores the data available then and logs the result with the close as the
/// prediction timestamp.
pub fn prospective_replay(
    fused: &[FusedWindow],
    scoring: &ScoringConfig,
    p: &ProspectiveConfig,
) -> Result<Vec<PredictionLogEntry>, EvalError> {
    let mut out = Vec::new();
    for (t, day) in fused.iter().enumerate() {
        if p.from.is_some_and(|f| day.date < f) || p.to.is_some_and(|e| day.date > e) {
            continue;
        }
        let lo = p.history_days.map_or(0, |h| (t + 1).saturating_sub(h.max(1)));
        let scored = score_pipeline(&fused[lo..=t], scoring)?;
        let s = scored.last().expect("non-empty window");
        out.push(PredictionLogEntry {
            timestamp: trading_day_end(day.date),
            date: day.date,
            ticker: day.ticker.clone(),
            risk_score: s.risk_score,
            predicted_label: u8::from(s.risk_score >= p.threshold),
            model_version: p.model_version.clone(),
            run_id: p.run_id.clone(),
            extra: extra_json(s, t + 1 - lo),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{Confidence, LabelSource, ManipulationType};

    fn d(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    fn entry(ticker: &str, date: &str, hour: u32, score: f64, run: &str) -> PredictionLogEntry {
        let date = d(date);
        PredictionLogEntry {
            timestamp: Utc.from_utc_datetime(&date.and_hms_opt(hour, 0, 0).unwrap()),
            date,
            ticker: ticker.into(),
            risk_score: score,
            predicted_label: u8::from(score >= 0.5),
            model_version: "test".into(),
            run_id: run.into(),
            extra: "{}".into(),
        }
    }

    fn label(ticker: &str, date: &str, l: u8) -> GroundTruthLabel {
        GroundTruthLabel {
            ticker: ticker.into(),
            date: d(date),
            label: l,
            manipulation_type: if l == 1 {
                ManipulationType::PumpAndDump
            } else {
                ManipulationType::Normal
            },
            confidence: Confidence::Medium,
            source: LabelSource::SyntheticNegative,
        }
    }

    #[test]
    fn append_then_read_is_identity() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("logs/predictions.jsonl");
        let entries = vec![
            entry("GME", "2021-01-04", 21, 0.3, "r1"),
            entry("GME", "2021-01-04", 22, 0.4, "r2"),
        ];
        let mut log = PredictionLog::open(&path).unwrap();
        log.append(&entries[0]).unwrap();
        log.append(&entries[1]).unwrap();
        assert_eq!(PredictionLog::read(&path).unwrap(), entries);
        // Reopening keeps the ordering contract.
        let mut log = PredictionLog::open(&path).unwrap();
        assert!(matches!(
            log.append(&entry("GME", "2021-01-04", 21, 0.1, "r3")),
            Err(EvalError::OutOfOrder { .. })
        ));
    }

    #[test]
    fn field_names_are_fixed() {
        let line = serde_json::to_string(&entry("GME", "2021-01-04", 21, 0.3, "r")).unwrap();
        let v: serde_json::Value = serde_json::from_str(&line).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        let mut expected = vec![
            "timestamp", "date", "ticker", "risk_score", "predicted_label", "model_version", "run_id", "extra",
        ];
        expected.sort();
        assert_eq!(keys, expected);
    }

    #[test]
    fn rejects_bad_entries() {
        let dir = tempfile::tempdir().unwrap();
        let mut log = PredictionLog::open(dir.path().join("p.jsonl")).unwrap();
        let mut bad = entry("GME", "2021-01-04", 21, 0.3, "r");
        bad.extra = "{not json".into();
        assert!(matches!(log.append(&bad), Err(EvalError::MalformedExtra(_))));
        let early = entry("GME", "2021-01-04", 15, 0.3, "r");
        assert!(matches!(log.append(&early), Err(EvalError::PrematureTimestamp { .. })));
    }

    #[test]
    fn join_takes_latest_and_is_inner() {
        let entries = vec![
            entry("GME", "2021-01-04", 23, 0.9, "late"),
            entry("GME", "2021-01-04", 21, 0.1, "early"),
            entry("TSLA", "2021-01-04", 21, 0.2, "x"),
            entry("AMC", "2021-01-05", 21, 0.6, "x"),
        ];
        let labels = vec![label("GME", "2021-01-04", 1), label("AMC", "2021-01-05", 0), label("BB", "2021-01-05", 0)];
        let rows = join_log_with_labels(&entries, &labels);
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].ticker, "AMC");
        assert_eq!(rows[1].risk_score, 0.9);
        assert_eq!(rows[1].predicted_label, 1);
    }
}
