//! Read-only JSON API over the persisted stages and reports.
//!
//! Every score in a response is the stored value; the service filters and
//! selects but never rescores. Errors are `{"error": ..., "status": ...}`
//! with 400 for malformed parameters, 404 for unknown tickers, days, modes
//! and 503 when the data a request needs has not been produced yet.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;

use amrs_core::eval::{lead_time, Table};
use amrs_core::ingest::store::{DatasetStore, Stage, StoreError};
use amrs_core::ingest::{load_ground_truth, StoredPost};
use amrs_core::scoring::{RiskLevel, ScoredWindow};
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use chrono::NaiveDate;
use serde::Serialize;
use serde_json::{json, Value};

use crate::commands::EvalMode;
use crate::config::RunConfig;

#[derive(Debug, Clone, PartialEq)]
pub enum ApiError {
    BadRequest(String),
    NotFound(String),
    NotReady(String),
    Internal(String),
}

impl ApiError {
    fn status(&self) -> StatusCode {
        match self {
            ApiError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ApiError::NotFound(_) => StatusCode::NOT_FOUND,
            ApiError::NotReady(_) => StatusCode::SERVICE_UNAVAILABLE,
            ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }

    fn message(&self) -> &str {
        match self {
            ApiError::BadRequest(m) | ApiError::NotFound(m) | ApiError::NotReady(m) | ApiError::Internal(m) => m,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = self.status();
        let body = json!({ "error": self.message(), "status": status.as_u16() });
        (status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

#[derive(Debug, Clone)]
pub struct AppState {
    cfg: Arc<RunConfig>,
    store: DatasetStore,
}

impl AppState {
    pub fn new(cfg: RunConfig) -> Self {
        let store = cfg.store();
        Self {
            cfg: Arc::new(cfg),
            store,
        }
    }

    fn scored_tickers(&self) -> Result<Vec<String>, ApiError> {
        match self.store.tickers(Stage::Scored) {
            Ok(t) if !t.is_empty() => Ok(t),
            Ok(_) | Err(StoreError::Missing { .. }) => Err(ApiError::NotReady(
                "no scored data yet; run `amrs ingest` and `amrs score`".into(),
            )),
            Err(e) => Err(ApiError::Internal(e.to_string())),
        }
    }

    fn known(&self, ticker: &str) -> bool {
        self.cfg.tickers.iter().any(|t| t == ticker)
    }

    /// The scored series of a ticker: 404 when the ticker is neither
    /// configured nor scored, 503 when it is configured but not yet scored.
    fn scored(&self, ticker: &str) -> Result<Vec<ScoredWindow>, ApiError> {
        let scored = self.scored_tickers()?;
        if !scored.iter().any(|t| t == ticker) {
            return Err(if self.known(ticker) {
                ApiError::NotReady(format!("{ticker} has not been scored yet"))
            } else {
                ApiError::NotFound(format!("unknown ticker {ticker:?}"))
            });
        }
        self.store.read(ticker).map_err(store_error)
    }
}

fn store_error(e: StoreError) -> ApiError {
    match e {
        StoreError::Missing { path } => ApiError::NotReady(format!("{} not found", path.display())),
        e => ApiError::Internal(e.to_string()),
    }
}

fn parse_date(name: &str, s: &str) -> Result<NaiveDate, ApiError> {
    s.parse()
        .map_err(|_| ApiError::BadRequest(format!("{name}: {s:?} is not an ISO-8601 date (YYYY-MM-DD)")))
}

/// Runs blocking file IO off the async executor.
async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, ApiError> + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))?
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/tickers", get(tickers))
        .route("/api/windows", get(windows))
        .route("/api/windows/{ticker}/{date}", get(window_detail))
        .route("/api/leadtime/{ticker}", get(leadtime))
        .route("/api/evaluation/{mode}", get(evaluation))
        .route("/api/posts/{ticker}/{date}", get(posts))
        .fallback(|| async { ApiError::NotFound("no such endpoint".into()) })
        .layer(axum::middleware::map_response(allow_any_origin))
        .with_state(state)
}

/// The dashboard may be served from another origin; the API is read-only.
async fn allow_any_origin(mut res: Response) -> Response {
    res.headers_mut()
        .insert(header::ACCESS_CONTROL_ALLOW_ORIGIN, HeaderValue::from_static("*"));
    res
}

#[derive(Debug, Serialize)]
pub struct TickerSummary {
    pub ticker: String,
    pub rows: usize,
    pub first_date: Option<NaiveDate>,
    pub last_date: Option<NaiveDate>,
    pub max_risk_score: Option<f64>,
    pub max_risk_date: Option<NaiveDate>,
    pub high_risk_days: usize,
    pub suspicious_days: usize,
}

fn summarize(ticker: String, rows: &[ScoredWindow]) -> TickerSummary {
    let peak = rows.iter().fold(None::<&ScoredWindow>, |best, s| match best {
        Some(b) if b.risk_score >= s.risk_score => Some(b),
        _ => Some(s),
    });
    TickerSummary {
        ticker,
        rows: rows.len(),
        first_date: rows.first().map(|s| s.window.date),
        last_date: rows.last().map(|s| s.window.date),
        max_risk_score: peak.map(|s| s.risk_score),
        max_risk_date: peak.map(|s| s.window.date),
        high_risk_days: rows.iter().filter(|s| s.risk_level == RiskLevel::High).count(),
        suspicious_days: rows.iter().filter(|s| s.is_suspicious).count(),
    }
}

async fn tickers(State(st): State<AppState>) -> ApiResult<Vec<TickerSummary>> {
    blocking(move || {
        let mut out = Vec::new();
        for t in st.scored_tickers()? {
            let rows: Vec<ScoredWindow> = st.store.read(&t).map_err(store_error)?;
            out.push(summarize(t, &rows));
        }
        Ok(Json(out))
    })
    .await
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct WindowFilter {
    pub ticker: Option<String>,
    pub from: Option<NaiveDate>,
    pub to: Option<NaiveDate>,
    pub min_level: Option<RiskLevel>,
    pub min_score: Option<f64>,
}

impl WindowFilter {
    pub fn parse(q: &HashMap<String, String>) -> Result<Self, ApiError> {
        let from = q.get("from").map(|s| parse_date("from", s)).transpose()?;
        let to = q.get("to").map(|s| parse_date("to", s)).transpose()?;
        if let (Some(f), Some(t)) = (from, to) {
            if f > t {
                return Err(ApiError::BadRequest(format!("from {f} is after to {t}")));
            }
        }
        let min_level = q
            .get("min_level")
            .map(|s| {
                s.parse::<RiskLevel>()
                    .map_err(|_| ApiError::BadRequest(format!("min_level {s:?} is not Low, Medium or High")))
            })
            .transpose()?;
        let min_score = q
            .get("min_score")
            .map(|s| match s.parse::<f64>() {
                Ok(v) if (0.0..=1.0).contains(&v) => Ok(v),
                _ => Err(ApiError::BadRequest(format!("min_score {s:?} is not a number in [0, 1]"))),
            })
            .transpose()?;
        Ok(Self {
            ticker: q.get("ticker").cloned(),
            from,
            to,
            min_level,
            min_score,
        })
    }

    pub fn matches(&self, s: &ScoredWindow) -> bool {
        let d = s.window.date;
        self.from.is_none_or(|f| d >= f)
            && self.to.is_none_or(|t| d <= t)
            && self.min_level.is_none_or(|l| s.risk_level >= l)
            && self.min_score.is_none_or(|m| s.risk_score >= m)
    }
}

async fn windows(
    State(st): State<AppState>,
    Query(q): Query<HashMap<String, String>>,
) -> ApiResult<Vec<ScoredWindow>> {
    let filter = WindowFilter::parse(&q)?;
    blocking(move || {
        let tickers = match &filter.ticker {
            Some(t) => vec![t.clone()],
            None => st.scored_tickers()?,
        };
        let mut out = Vec::new();
        for t in tickers {
            out.extend(st.scored(&t)?.into_iter().filter(|s| filter.matches(s)));
        }
        out.sort_by(|a, b| (a.window.date, &a.window.ticker).cmp(&(b.window.date, &b.window.ticker)));
        Ok(Json(out))
    })
    .await
}

async fn window_detail(
    State(st): State<AppState>,
    Path((ticker, date)): Path<(String, String)>,
) -> ApiResult<Value> {
    let date = parse_date("date", &date)?;
    blocking(move || {
        let rows = st.scored(&ticker)?;
        let row = rows
            .into_iter()
            .find(|s| s.window.date == date)
            .ok_or_else(|| ApiError::NotFound(format!("{ticker} has no scored window on {date}")))?;
        let mut body = serde_json::to_value(&row).map_err(|e| ApiError::Internal(e.to_string()))?;
        body["weights"] = json!(st.cfg.scoring.weights);
        Ok(Json(body))
    })
    .await
}

async fn leadtime(State(st): State<AppState>, Path(ticker): Path<String>) -> ApiResult<Value> {
    blocking(move || {
        let scored = st.scored(&ticker)?;
        let labels = load_ground_truth(&st.cfg.paths.ground_truth).map_err(|e| ApiError::Internal(e.to_string()))?;
        let mut events: Vec<NaiveDate> = labels
            .iter()
            .filter(|l| l.ticker == ticker && l.is_positive())
            .map(|l| l.date)
            .collect();
        events.sort();
        let (alert, lookback) = (st.cfg.thresholds.alert, st.cfg.lead_time.lookback);
        let records: Vec<Value> = events
            .into_iter()
            .map(|d| match lead_time(&scored, d, alert, lookback) {
                Ok(r) => {
                    let e = scored.partition_point(|s| s.window.date < d);
                    let mut v = json!(r);
                    v["lookback_start_date"] = json!(scored[e - lookback].window.date);
                    v
                }
                Err(err) => json!({ "event_start_date": d, "error": err.to_string() }),
            })
            .collect();
        Ok(Json(json!({
            "ticker": ticker,
            "alert_threshold": alert,
            "lookback": lookback,
            "events": records,
        })))
    })
    .await
}

/// Parses a report cell back into a JSON scalar.
fn cell_value(s: &str) -> Value {
    if s.is_empty() {
        return Value::Null;
    }
    match s {
        "true" => return Value::Bool(true),
        "false" => return Value::Bool(false),
        _ => {}
    }
    if let Ok(i) = s.parse::<i64>() {
        return json!(i);
    }
    match s.parse::<f64>() {
        Ok(f) if f.is_finite() => json!(f),
        _ => Value::String(s.to_string()),
    }
}

fn table_json(t: &Table) -> Value {
    let rows: Vec<Value> = t
        .rows
        .iter()
        .map(|r| {
            let obj: serde_json::Map<String, Value> =
                t.columns.iter().zip(r).map(|(c, v)| (c.clone(), cell_value(v))).collect();
            Value::Object(obj)
        })
        .collect();
    json!({ "columns": t.columns, "rows": rows })
}

async fn evaluation(State(st): State<AppState>, Path(mode): Path<String>) -> ApiResult<Value> {
    let m = EvalMode::from_name(&mode).ok_or_else(|| ApiError::NotFound(format!("unknown evaluation mode {mode:?}")))?;
    blocking(move || {
        let mut tables = serde_json::Map::new();
        for name in m.reports() {
            let path: PathBuf = st.cfg.reports_dir().join(format!("{name}.csv"));
            if !path.exists() {
                return Err(ApiError::NotReady(format!(
                    "report {name} not generated yet; run `amrs evaluate --mode {mode}`"
                )));
            }
            let t = Table::read(&path).map_err(|e| ApiError::Internal(e.to_string()))?;
            tables.insert(name.to_string(), table_json(&t));
        }
        Ok(Json(json!({ "mode": mode, "tables": tables })))
    })
    .await
}

async fn posts(State(st): State<AppState>, Path((ticker, date)): Path<(String, String)>) -> ApiResult<Value> {
    let date = parse_date("date", &date)?;
    blocking(move || {
        if !st.known(&ticker) && !st.store.exists(Stage::RawSocial, &ticker) {
            return Err(ApiError::NotFound(format!("unknown ticker {ticker:?}")));
        }
        let all: Vec<StoredPost> = st.store.read(&ticker).map_err(store_error)?;
        let mut day: Vec<StoredPost> = all.into_iter().filter(|p| p.trading_day == Some(date)).collect();
        day.sort_by(|a, b| (a.timestamp, &a.post_id).cmp(&(b.timestamp, &b.post_id)));
        Ok(Json(json!({ "ticker": ticker, "date": date, "count": day.len(), "posts": day })))
    })
    .await
}

/// Binds and serves until Ctrl-C.
pub async fn serve(cfg: RunConfig, addr: std::net::SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("serving on http://{}", listener.local_addr()?);
    axum::serve(listener, router(AppState::new(cfg)))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
