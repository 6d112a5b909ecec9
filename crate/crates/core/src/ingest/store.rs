//! Self-describing columnar stage files.
//!
//! One file per `(stage, ticker)` at `<root>/<stage>/<TICKER>.cols.json`.
//! The file carries its own schema followed by one value array per column:
//!
//! ```json
//! {"format":"amrs-columnar","version":1,"stage":"scored","ticker":"GME",
//!  "row_count":2,
//!  "columns":[{"name":"date","type":"date","values":["2021-01-04","2021-01-05"]}, ...]}
//! ```
//!
//! Readers ignore columns they do not know (with a warning) and reject files
//! whose known columns are missing or retyped.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

pub const FORMAT_NAME: &str = "amrs-columnar";
pub const FORMAT_VERSION: u32 = 1;
pub const FILE_EXTENSION: &str = "cols.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    RawSocial,
    Market,
    Fused,
    Scored,
}

impl Stage {
    pub const ALL: [Stage; 4] = [Stage::RawSocial, Stage::Market, Stage::Fused, Stage::Scored];

    pub fn dir_name(&self) -> &'static str {
        match self {
            Stage::RawSocial => "raw_social",
            Stage::Market => "market",
            Stage::Fused => "fused",
            Stage::Scored => "scored",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.dir_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnType {
    F64,
    OptF64,
    U64,
    Bool,
    Str,
    OptStr,
    Date,
    OptDate,
    Datetime,
    StrList,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColumnDef {
    pub name: &'static str,
    pub ty: ColumnType,
}

pub const fn col(name: &'static str, ty: ColumnType) -> ColumnDef {
    ColumnDef { name, ty }
}

/// A row type persisted as one stage.
pub trait StageRow: Serialize + DeserializeOwned {
    const STAGE: Stage;
    fn schema() -> Vec<ColumnDef>;
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: stage file not found")]
    Missing { path: PathBuf },
    #[error("{path}: corrupt dataset file: {reason}")]
    CorruptFile { path: PathBuf, reason: String },
    #[error("{path}: schema mismatch: {reason}")]
    SchemaEvolutionMismatch { path: PathBuf, reason: String },
    #[error("row {row} does not match the {stage} schema: {reason}")]
    InvalidRow { stage: Stage, row: usize, reason: String },
}

#[derive(Serialize, Deserialize)]
struct ColumnFile {
    name: String,
    #[serde(rename = "type")]
    ty: ColumnType,
    values: Vec<Value>,
}

#[derive(Serialize, Deserialize)]
struct DatasetFile {
    format: String,
    version: u32,
    stage: Stage,
    ticker: String,
    row_count: usize,
    columns: Vec<ColumnFile>,
}

/// Non-fatal findings from a read.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReadReport {
    pub ignored_columns: Vec<String>,
}

fn encode<R: StageRow>(ticker: &str, rows: &[R]) -> Result<DatasetFile, StoreError> {
    let schema = R::schema();
    let mut columns: Vec<ColumnFile> = schema
        .iter()
        .map(|c| ColumnFile {
            name: c.name.to_string(),
            ty: c.ty,
            values: Vec::with_capacity(rows.len()),
        })
        .collect();
    for (i, row) in rows.iter().enumerate() {
        let invalid = |reason: String| StoreError::InvalidRow {
            stage: R::STAGE,
            row: i,
            reason,
        };
        let mut obj = match serde_json::to_value(row).map_err(|e| invalid(e.to_string()))? {
            Value::Object(m) => m,
            other => return Err(invalid(format!("row serialized to {other}"))),
        };
        for column in columns.iter_mut() {
            let v = obj
                .remove(&column.name)
                .ok_or_else(|| invalid(format!("missing column {}", column.name)))?;
            column.values.push(v);
        }
        if let Some(extra) = obj.keys().next() {
            return Err(invalid(format!("field {extra} not declared in schema")));
        }
    }
    Ok(DatasetFile {
        format: FORMAT_NAME.to_string(),
        version: FORMAT_VERSION,
        stage: R::STAGE,
        ticker: ticker.to_string(),
        row_count: rows.len(),
        columns,
    })
}

/// Writes rows to `path`, replacing any previous file atomically.
pub fn write_dataset<R: StageRow>(path: &Path, ticker: &str, rows: &[R]) -> Result<(), StoreError> {
    let file = encode(ticker, rows)?;
    let io = |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io)?;
    }
    let mut buf = Vec::new();
    serde_json::to_writer(&mut buf, &file).map_err(|e| StoreError::InvalidRow {
        stage: R::STAGE,
        row: 0,
        reason: e.to_string(),
    })?;
    buf.push(b'\n');
    let tmp = path.with_extension("tmp");
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(&buf).map_err(io)?;
    f.sync_all().map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

/// Reads rows, returning the names of ignored unknown columns.
pub fn read_dataset_with_report<R: StageRow>(path: &Path) -> Result<(Vec<R>, ReadReport), StoreError> {
    let bytes = fs::read(path).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            StoreError::Missing {
                path: path.to_path_buf(),
            }
        } else {
            StoreError::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    })?;
    let corrupt = |reason: String| StoreError::CorruptFile {
        path: path.to_path_buf(),
        reason,
    };
    let mismatch = |reason: String| StoreError::SchemaEvolutionMismatch {
        path: path.to_path_buf(),
        reason,
    };
    let file: DatasetFile = serde_json::from_slice(&bytes).map_err(|e| corrupt(e.to_string()))?;
    if file.format != FORMAT_NAME {
        return Err(corrupt(format!("unknown format {:?}", file.format)));
    }
    if file.version > FORMAT_VERSION {
        return Err(mismatch(format!("format version {} is newer than {FORMAT_VERSION}", file.version)));
    }
    if file.stage != R::STAGE {
        return Err(mismatch(format!("file holds stage {}, expected {}", file.stage, R::STAGE)));
    }
    if let Some(c) = file.columns.iter().find(|c| c.values.len() != file.row_count) {
        return Err(corrupt(format!(
            "column {} has {} values, header says {}",
            c.name,
            c.values.len(),
            file.row_count
        )));
    }

    let schema = R::schema();
    let mut by_name: HashMap<String, ColumnFile> =
        file.columns.into_iter().map(|c| (c.name.clone(), c)).collect();
    let mut known = Vec::with_capacity(schema.len());
    for def in &schema {
        let c = by_name
            .remove(def.name)
            .ok_or_else(|| mismatch(format!("missing column {}", def.name)))?;
        if c.ty != def.ty {
            return Err(mismatch(format!(
                "column {} has type {:?}, expected {:?}",
                def.name, c.ty, def.ty
            )));
        }
        known.push(c);
    }
    let mut ignored: Vec<String> = by_name.into_keys().collect();
    ignored.sort();
    for name in &ignored {
        log::warn!("{}: ignoring unknown column {name}", path.display());
    }

    let mut iters: Vec<_> = known.into_iter().map(|c| (c.name, c.values.into_iter())).collect();
    let mut rows = Vec::with_capacity(file.row_count);
    for i in 0..file.row_count {
        let mut obj = Map::with_capacity(iters.len());
        for (name, values) in iters.iter_mut() {
            obj.insert(name.clone(), values.next().expect("length checked"));
        }
        let row: R = serde_json::from_value(Value::Object(obj))
            .map_err(|e| corrupt(format!("row {i}: {e}")))?;
        rows.push(row);
    }
    Ok((rows, ReadReport { ignored_columns: ignored }))
}

pub fn read_dataset<R: StageRow>(path: &Path) -> Result<Vec<R>, StoreError> {
    read_dataset_with_report(path).map(|(rows, _)| rows)
}

/// Stage files under one processed-data root.
#[derive(Debug, Clone)]
pub struct DatasetStore {
    root: PathBuf,
}

impl DatasetStore {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn stage_dir(&self, stage: Stage) -> PathBuf {
        self.root.join(stage.dir_name())
    }

    pub fn path(&self, stage: Stage, ticker: &str) -> PathBuf {
        self.stage_dir(stage).join(format!("{ticker}.{FILE_EXTENSION}"))
    }

    pub fn write<R: StageRow>(&self, ticker: &str, rows: &[R]) -> Result<PathBuf, StoreError> {
        let path = self.path(R::STAGE, ticker);
        write_dataset(&path, ticker, rows)?;
        Ok(path)
    }

    pub fn read<R: StageRow>(&self, ticker: &str) -> Result<Vec<R>, StoreError> {
        read_dataset(&self.path(R::STAGE, ticker))
    }

    pub fn exists(&self, stage: Stage, ticker: &str) -> bool {
        self.path(stage, ticker).is_file()
    }

    /// Tickers with a file in `stage`, sorted. A missing stage directory is an error.
    pub fn tickers(&self, stage: Stage) -> Result<Vec<String>, StoreError> {
        let dir = self.stage_dir(stage);
        let entries = fs::read_dir(&dir).map_err(|source| {
            if source.kind() == std::io::ErrorKind::NotFound {
                StoreError::Missing { path: dir.clone() }
            } else {
                StoreError::Io {
                    path: dir.clone(),
                    source,
                }
            }
        })?;
        let suffix = format!(".{FILE_EXTENSION}");
        let mut out = Vec::new();
        for e in entries {
            let e = e.map_err(|source| StoreError::Io {
                path: dir.clone(),
                source,
            })?;
            if let Some(name) = e.file_name().to_str() {
                if let Some(t) = name.strip_suffix(&suffix) {
                    out.push(t.to_string());
                }
            }
        }
        out.sort();
        Ok(out)
    }
}
