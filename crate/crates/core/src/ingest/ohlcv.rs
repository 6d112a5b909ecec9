//! Daily OHLCV bars from CSV (`date,open,high,low,close,adj_close,volume`).

use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::IngestError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OhlcvBar {
    pub ticker: String,
    pub date: NaiveDate,
    pub open: f64,
    pub high: f64,
    pub low: f64,
    pub close: f64,
    pub adj_close: f64,
    pub volume: f64,
}

impl OhlcvBar {
    /// Checks price ordering and sign constraints; returns the violated rule.
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("open", self.open),
            ("high", self.high),
            ("low", self.low),
            ("close", self.close),
            ("adj_close", self.adj_close),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("{name} must be a positive price, got {v}"));
            }
        }
        if !(self.volume.is_finite() && self.volume >= 0.0) {
            return Err(format!("volume must be >= 0, got {}", self.volume));
        }
        if !(self.low <= self.open && self.open <= self.high) {
            return Err(format!(
                "open {} outside [low {}, high {}]",
                self.open, self.low, self.high
            ));
        }
        if !(self.low <= self.close && self.close <= self.high) {
            return Err(format!(
                "close {} outside [low {}, high {}]",
                self.close, self.low, self.high
            ));
        }
        Ok(())
    }
}

const REQUIRED: [&str; 6] = ["date", "open", "high", "low", "close", "volume"];

/// Loads and validates one ticker's bars. Rows must already be in strictly
/// increasing date order; a missing or empty `adj_close` copies `close`.
pub fn load_ohlcv(path: impl AsRef<Path>, ticker: &str) -> Result<Vec<OhlcvBar>, IngestError> {
    let path = path.as_ref();
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let headers = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let mut idx = [0usize; 6];
    for (slot, name) in idx.iter_mut().zip(REQUIRED) {
        *slot = col(name).ok_or_else(|| IngestError::MissingColumn {
            path: path.to_path_buf(),
            column: name.to_string(),
        })?;
    }
    let adj_idx = col("adj_close");

    let mut bars: Vec<OhlcvBar> = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let field = |j: usize| rec.get(j).unwrap_or("");
        let num = |name: &str, j: usize| -> Result<f64, IngestError> {
            let raw = field(j);
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| IngestError::NonNumericField {
                    path: path.to_path_buf(),
                    row,
                    column: name.to_string(),
                    value: raw.to_string(),
                })
        };
        let date: NaiveDate = field(idx[0]).parse().map_err(|_| IngestError::NonNumericField {
            path: path.to_path_buf(),
            row,
            column: "date".into(),
            value: field(idx[0]).to_string(),
        })?;
        let close = num("close", idx[4])?;
        let adj_close = match adj_idx.map(field) {
            Some(s) if !s.is_empty() => num("adj_close", adj_idx.unwrap())?,
            _ => close,
        };
        let bar = OhlcvBar {
            ticker: ticker.to_string(),
            date,
            open: num("open", idx[1])?,
            high: num("high", idx[2])?,
            low: num("low", idx[3])?,
            close,
            adj_close,
            volume: num("volume", idx[5])?,
        };
        bar.validate().map_err(|reason| IngestError::InvalidBar {
            path: path.to_path_buf(),
            row,
            reason,
        })?;
        if let Some(prev) = bars.last() {
            if bar.date == prev.date {
                return Err(IngestError::DuplicateDate {
                    path: path.to_path_buf(),
                    row,
                    date: bar.date,
                });
            }
            if bar.date < prev.date {
                return Err(IngestError::NonMonotonicDates {
                    path: path.to_path_buf(),
                    row,
                    previous: prev.date,
                    date: bar.date,
                });
            }
        }
        bars.push(bar);
    }
    Ok(bars)
}

/// Writes bars in the canonical column order.
pub fn write_ohlcv_csv(path: impl AsRef<Path>, bars: &[OhlcvBar]) -> Result<(), IngestError> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    w.write_record(["date", "open", "high", "low", "close", "adj_close", "volume"])
        .map_err(|e| csv_error(path, e))?;
    for b in bars {
        w.write_record([
            b.date.to_string(),
            format!("{:.2}", b.open),
            format!("{:.2}", b.high),
            format!("{:.2}", b.low),
            format!("{:.2}", b.close),
            format!("{:.2}", b.adj_close),
            format!("{:.0}", b.volume),
        ])
        .map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn csv_error(path: &Path, e: csv::Error) -> IngestError {
    if let csv::ErrorKind::Io(_) = e.kind() {
        if let csv::ErrorKind::Io(io) = e.into_kind() {
            return IngestError::Io {
                path: path.to_path_buf(),
                source: io,
            };
        }
        unreachable!()
    }
    IngestError::Csv {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    const HEADER: &str = "date,open,high,low,close,adj_close,volume\n";

    #[test]
    fn loads_two_rows() {
        let f = write_tmp(&format!(
            "{HEADER}2021-01-04,10,11,9,10.5,10.5,1000\n2021-01-05,10.5,12,10,11,11,2000\n"
        ));
        let bars = load_ohlcv(f.path(), "GME").unwrap();
        assert_eq!(bars.len(), 2);
        assert!(bars[0].date < bars[1].date);
        assert_eq!(bars[1].volume, 2000.0);
        assert_eq!(bars[0].ticker, "GME");
    }

    #[test]
    fn close_below_low_is_row_error() {
        let f = write_tmp(&format!(
            "{HEADER}2021-01-04,10,11,9,10.5,10.5,1000\n2021-01-05,10,11,9,8,8,1000\n"
        ));
        match load_ohlcv(f.path(), "X") {
            Err(IngestError::InvalidBar { row, .. }) => assert_eq!(row, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn decreasing_dates_rejected() {
        let f = write_tmp(&format!(
            "{HEADER}2021-01-05,10,11,9,10,10,1\n2021-01-04,10,11,9,10,10,1\n"
        ));
        assert!(matches!(
            load_ohlcv(f.path(), "X"),
            Err(IngestError::NonMonotonicDates { row: 2, .. })
        ));
    }

    #[test]
    fn duplicate_date_rejected() {
        let f = write_tmp(&format!(
            "{HEADER}2021-01-05,10,11,9,10,10,1\n2021-01-05,10,11,9,10,10,1\n"
        ));
        assert!(matches!(load_ohlcv(f.path(), "X"), Err(IngestError::DuplicateDate { .. })));
    }

    #[test]
    fn missing_column_and_non_numeric() {
        let f = write_tmp("date,open,high,low,close\n2021-01-04,1,1,1,1\n");
        assert!(matches!(
            load_ohlcv(f.path(), "X"),
            Err(IngestError::MissingColumn { ref column, .. }) if column == "volume"
        ));
        let f = write_tmp(&format!("{HEADER}2021-01-04,1,abc,1,1,1,1\n"));
        assert!(matches!(
            load_ohlcv(f.path(), "X"),
            Err(IngestError::NonNumericField { row: 1, ref column, .. }) if column == "high"
        ));
    }

    #[test]
    fn missing_adj_close_copies_close() {
        let f = write_tmp("date,open,high,low,close,adj_close,volume\n2021-01-04,1,2,1,1.5,,10\n");
        assert_eq!(load_ohlcv(f.path(), "X").unwrap()[0].adj_close, 1.5);
        let f = write_tmp("date,open,high,low,close,volume\n2021-01-04,1,2,1,1.5,10\n");
        assert_eq!(load_ohlcv(f.path(), "X").unwrap()[0].adj_close, 1.5);
    }

    #[test]
    fn missing_file_names_path() {
        let err = load_ohlcv("/nonexistent/ZZZ.csv", "ZZZ").unwrap_err();
        assert!(err.to_string().contains("ZZZ.csv"));
    }
}
