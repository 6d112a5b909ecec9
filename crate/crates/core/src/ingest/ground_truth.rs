//! Labeled ticker-days (`ticker,date,label,manipulation_type,confidence,source`).

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::ohlcv::csv_error;
use super::IngestError;

pub const GROUND_TRUTH_COLUMNS: [&str; 6] =
    ["ticker", "date", "label", "manipulation_type", "confidence", "source"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ManipulationType {
    CoordinatedTrading,
    PumpAndDump,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Confidence {
    High,
    Medium,
    Low,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelSource {
    Sec,
    Community,
    SyntheticNegative,
}

macro_rules! str_enum {
    ($ty:ty { $($variant:ident => $s:literal),+ $(,)? }) => {
        impl $ty {
            pub fn as_str(&self) -> &'static str {
                match self { $(Self::$variant => $s),+ }
            }
        }
        impl FromStr for $ty {
            type Err = ();
            fn from_str(s: &str) -> Result<Self, ()> {
                match s { $($s => Ok(Self::$variant),)+ _ => Err(()) }
            }
        }
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

str_enum!(ManipulationType {
    CoordinatedTrading => "coordinated_trading",
    PumpAndDump => "pump_and_dump",
    Normal => "normal",
});
str_enum!(Confidence { High => "high", Medium => "medium", Low => "low" });
str_enum!(LabelSource {
    Sec => "sec",
    Community => "community",
    SyntheticNegative => "synthetic_negative",
});

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroundTruthLabel {
    pub ticker: String,
    pub date: NaiveDate,
    pub label: u8,
    pub manipulation_type: ManipulationType,
    pub confidence: Confidence,
    pub source: LabelSource,
}

impl GroundTruthLabel {
    pub fn is_positive(&self) -> bool {
        self.label == 1
    }
}

/// Parses the ground-truth table. The header must match the canonical column
/// list exactly; `(ticker, date)` pairs must be unique.
pub fn load_ground_truth(path: impl AsRef<Path>) -> Result<Vec<GroundTruthLabel>, IngestError> {
    let path = path.as_ref();
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    if headers != GROUND_TRUTH_COLUMNS {
        return Err(IngestError::SchemaMismatch {
            path: path.to_path_buf(),
            expected: GROUND_TRUTH_COLUMNS.iter().map(|s| s.to_string()).collect(),
            found: headers,
        });
    }

    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let bad = |column: &str, value: &str| IngestError::NonNumericField {
            path: path.to_path_buf(),
            row,
            column: column.to_string(),
            value: value.to_string(),
        };
        let ticker = rec[0].to_string();
        if ticker.is_empty() {
            return Err(bad("ticker", ""));
        }
        let date: NaiveDate = rec[1].parse().map_err(|_| bad("date", &rec[1]))?;
        let label: u8 = match &rec[2] {
            "0" => 0,
            "1" => 1,
            other => return Err(bad("label", other)),
        };
        let manipulation_type: ManipulationType =
            rec[3].parse().map_err(|_| bad("manipulation_type", &rec[3]))?;
        let confidence: Confidence = rec[4].parse().map_err(|_| bad("confidence", &rec[4]))?;
        let source: LabelSource = rec[5].parse().map_err(|_| bad("source", &rec[5]))?;
        if (label == 1) != (manipulation_type != ManipulationType::Normal) {
            return Err(IngestError::LabelTypeConflict {
                path: path.to_path_buf(),
                row,
                label,
                manipulation_type: manipulation_type.to_string(),
            });
        }
        if !seen.insert((ticker.clone(), date)) {
            return Err(IngestError::DuplicateLabel {
                path: path.to_path_buf(),
                row,
                ticker,
                date,
            });
        }
        out.push(GroundTruthLabel {
            ticker,
            date,
            label,
            manipulation_type,
            confidence,
            source,
        });
    }
    Ok(out)
}
