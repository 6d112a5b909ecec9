//! The `ingest`, `score`, `evaluate` and `synth-market` commands. Each writes
//! its human-readable summary to `out`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use amrs_core::eval::report::{
    ablation_table, baseline_table, forward_walk_table, lead_time_table, metrics_table, sensitivity_table,
    threshold_table,
};
use amrs_core::eval::{
    ablation_run, baseline_comparison, confusion_and_metrics, forward_walk, join_log_with_labels, lead_time,
    prospective_replay, standard_ablations, threshold_sweep, weight_sensitivity, ForwardEvalRow, PredictionLog,
    PredictionLogEntry, ProspectiveConfig, Table,
};
use amrs_core::ingest::store::{DatasetStore, StageRow};
use amrs_core::ingest::{
    generate_synthetic_market, generate_synthetic_social, load_ground_truth, load_ohlcv, load_scenario_file,
    write_ohlcv_csv, GroundTruthLabel,
};
use amrs_core::scoring::{score_pipeline, FusedWindow, RiskLevel, ScoredWindow};
use amrs_core::social::Lexicon;
use amrs_core::stages::build_ticker_stages;
use clap::ValueEnum;

use crate::config::{CaseStudy, RunConfig};
use crate::{render_table, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, ValueEnum)]
pub enum EvalMode {
    #[value(name = "forward_walk", alias = "forward-walk")]
    ForwardWalk,
    #[value(name = "prospective")]
    Prospective,
    #[value(name = "lead_time", alias = "lead-time")]
    LeadTime,
    #[value(name = "thresholds")]
    Thresholds,
    #[value(name = "baselines")]
    Baselines,
    #[value(name = "ablation")]
    Ablation,
    #[value(name = "weights")]
    Weights,
    /// Every mode above, in order.
    #[value(name = "all")]
    All,
}

impl EvalMode {
    pub const EACH: [EvalMode; 7] = [
        EvalMode::ForwardWalk,
        EvalMode::Prospective,
        EvalMode::LeadTime,
        EvalMode::Thresholds,
        EvalMode::Baselines,
        EvalMode::Ablation,
        EvalMode::Weights,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            EvalMode::ForwardWalk => "forward_walk",
            EvalMode::Prospective => "prospective",
            EvalMode::LeadTime => "lead_time",
            EvalMode::Thresholds => "thresholds",
            EvalMode::Baselines => "baselines",
            EvalMode::Ablation => "ablation",
            EvalMode::Weights => "weights",
            EvalMode::All => "all",
        }
    }

    /// Modes that read the `[case_study]` window.
    pub fn needs_case_study(&self) -> bool {
        matches!(self, EvalMode::Baselines | EvalMode::Ablation | EvalMode::Weights)
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::EACH.into_iter().find(|m| m.name() == s)
    }

    /// Report files (without `.csv`) the mode writes.
    pub fn reports(&self) -> &'static [&'static str] {
        match self {
            EvalMode::ForwardWalk => &["forward_walk", "forward_walk_metrics"],
            EvalMode::Prospective => &["prospective", "prospective_metrics"],
            EvalMode::LeadTime => &["lead_time"],
            EvalMode::Thresholds => &["thresholds"],
            EvalMode::Baselines => &["baselines"],
            EvalMode::Ablation => &["ablation"],
            EvalMode::Weights => &["weights"],
            EvalMode::All => &[],
        }
    }
}

fn io_err(path: PathBuf) -> impl FnOnce(std::io::Error) -> CliError {
    move |source| CliError::Io { path, source }
}

fn say(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(io_err(PathBuf::from("<stdout>")))
}

fn load_lexicon(cfg: &RunConfig) -> Result<Option<Lexicon>, CliError> {
    Ok(match &cfg.paths.lexicon {
        Some(p) => Some(Lexicon::load(p)?),
        None => None,
    })
}

/// Reads a stage file, turning a missing file into a hint at the command
/// that produces it.
fn read_stage<R: StageRow>(store: &DatasetStore, ticker: &str, hint: &'static str) -> Result<Vec<R>, CliError> {
    let path = store.path(R::STAGE, ticker);
    if !path.exists() {
        return Err(CliError::MissingStage {
            stage: R::STAGE.dir_name(),
            ticker: ticker.to_string(),
            path,
            hint,
        });
    }
    Ok(store.read(ticker)?)
}

/// Writes OHLCV CSV fixtures from the scenario file's `[[market]]` tables.
pub fn synth_market(cfg: &RunConfig, force: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let scenarios = load_scenario_file(&cfg.paths.scenarios)?;
    for ticker in &cfg.tickers {
        let Some(sc) = scenarios.market_for(ticker) else {
            return Err(CliError::Usage(format!(
                "{}: no [[market]] scenario for {ticker}",
                cfg.paths.scenarios.display()
            )));
        };
        let path = cfg.ohlcv_path(ticker);
        if path.exists() && !force {
            return Err(CliError::Usage(format!("{} exists; pass --force to overwrite", path.display())));
        }
        let bars = generate_synthetic_market(sc)?;
        write_ohlcv_csv(&path, &bars)?;
        say(out, &format!("{ticker}: {} bars -> {}\n", bars.len(), path.display()))?;
    }
    Ok(())
}

/// Loads bars and generates the post corpus for every ticker, then writes the
/// raw_social, market and fused stages.
pub fn ingest(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let scenarios = load_scenario_file(&cfg.paths.scenarios)?;
    let custom = load_lexicon(cfg)?;
    let lexicon = custom.as_ref().unwrap_or_else(|| Lexicon::bundled());
    let store = cfg.store();
    for ticker in &cfg.tickers {
        let mut bars = load_ohlcv(cfg.ohlcv_path(ticker), ticker)?;
        bars.retain(|b| cfg.in_range(b.date));
        if bars.is_empty() {
            return Err(CliError::Usage(format!(
                "{}: no bars inside the configured date range",
                cfg.ohlcv_path(ticker).display()
            )));
        }
        let (posts, authors) = match scenarios.social_for(ticker) {
            Some(sc) => {
                let mut sc = sc.clone();
                sc.seed = cfg.seed;
                let corpus = generate_synthetic_social(&sc)?;
                (corpus.posts, corpus.authors)
            }
            None => {
                log::warn!("{ticker}: no [[social]] scenario; social features will be zero");
                (Vec::new(), Vec::new())
            }
        };
        let stages = build_ticker_stages(ticker, &bars, &posts, &authors, lexicon, &cfg.features)?;
        stages.write(&store)?;
        say(
            out,
            &format!(
                "{ticker}: {} market rows, {} posts ({} outside the calendar), {} fused rows\n",
                stages.market.len(),
                stages.posts.len(),
                stages.unassigned_posts(),
                stages.fused.len()
            ),
        )?;
    }
    Ok(())
}

/// Scores each ticker's fused stage and writes the scored stage.
pub fn score(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let store = cfg.store();
    for ticker in &cfg.tickers {
        let fused: Vec<FusedWindow> = read_stage(&store, ticker, "ingest")?;
        if fused.is_empty() {
            log::warn!("{ticker}: fused stage is empty");
        }
        let scored = score_pipeline(&fused, &cfg.scoring)?;
        store.write(ticker, &scored)?;
        say(out, &score_summary(ticker, &scored))?;
    }
    Ok(())
}

fn score_summary(ticker: &str, scored: &[ScoredWindow]) -> String {
    let high = scored.iter().filter(|s| s.risk_level == RiskLevel::High).count();
    let peak = scored
        .iter()
        .max_by(|a, b| a.risk_score.total_cmp(&b.risk_score).then(b.window.date.cmp(&a.window.date)));
    let suspicious: Vec<String> = scored
        .iter()
        .filter(|s| s.is_suspicious)
        .map(|s| s.window.date.to_string())
        .collect();
    let peak = peak.map_or("-".to_string(), |p| format!("{:.3} on {}", p.risk_score, p.window.date));
    let list = if suspicious.is_empty() {
        "none".to_string()
    } else {
        suspicious.join(", ")
    };
    format!(
        "{ticker}: {} rows, max risk {peak}, {high} high-risk days, suspicious: {list}\n",
        scored.len()
    )
}

struct EvalContext<'a> {
    cfg: &'a RunConfig,
    store: DatasetStore,
    labels: Option<Vec<GroundTruthLabel>>,
    scored: BTreeMap<String, Vec<ScoredWindow>>,
}

impl<'a> EvalContext<'a> {
    /// Labels for the configured tickers; the rest are skipped.
    fn labels(&mut self) -> Result<&[GroundTruthLabel], CliError> {
        if self.labels.is_none() {
            let (kept, skipped): (Vec<_>, Vec<_>) = load_ground_truth(&self.cfg.paths.ground_truth)?
                .into_iter()
                .partition(|l| self.cfg.tickers.contains(&l.ticker));
            if !skipped.is_empty() {
                log::warn!("skipping {} labels for tickers outside the run", skipped.len());
            }
            self.labels = Some(kept);
        }
        Ok(self.labels.as_deref().expect("just loaded"))
    }

    fn scored(&mut self, ticker: &str) -> Result<&[ScoredWindow], CliError> {
        if !self.scored.contains_key(ticker) {
            let rows = read_stage(&self.store, ticker, "score")?;
            self.scored.insert(ticker.to_string(), rows);
        }
        Ok(&self.scored[ticker])
    }

    fn case_study(&self, mode: EvalMode) -> Result<CaseStudy, CliError> {
        let cs = self.cfg.case_study.clone().ok_or_else(|| {
            CliError::Usage(format!("evaluate --mode {}: [case_study] is not configured", mode.name()))
        })?;
        if !self.cfg.tickers.contains(&cs.ticker) {
            return Err(CliError::Usage(format!(
                "evaluate --mode {}: case-study ticker {} is not among the run's tickers",
                mode.name(),
                cs.ticker
            )));
        }
        Ok(cs)
    }

    fn has_case_study(&self) -> bool {
        self.cfg.case_study.as_ref().is_some_and(|cs| self.cfg.tickers.contains(&cs.ticker))
    }

    fn write(&self, name: &str, t: &Table, out: &mut dyn Write) -> Result<(), CliError> {
        let path = self.cfg.reports_dir().join(format!("{name}.csv"));
        t.write(&path)?;
        say(out, &format!("== {name} ({})\n{}", path.display(), render_table(t)))
    }

    fn forward_rows(&mut self) -> Result<Vec<ForwardEvalRow>, CliError> {
        let labels = self.labels()?.to_vec();
        let mut tickers: Vec<String> = labels.iter().map(|l| l.ticker.clone()).collect();
        tickers.sort();
        tickers.dedup();
        let mut series = BTreeMap::new();
        for t in tickers {
            let fused: Vec<FusedWindow> = read_stage(&self.store, &t, "ingest")?;
            series.insert(t, fused);
        }
        Ok(forward_walk(&labels, &series, &self.cfg.scoring, self.cfg.thresholds.operating)?)
    }

    fn run(&mut self, mode: EvalMode, out: &mut dyn Write) -> Result<(), CliError> {
        let cfg = self.cfg;
        match mode {
            EvalMode::All => {
                for m in EvalMode::EACH {
                    if m.needs_case_study() && !self.has_case_study() {
                        log::warn!("skipping {}: no case study among the run's tickers", m.name());
                        continue;
                    }
                    self.run(m, out)?;
                }
            }
            EvalMode::ForwardWalk => {
                let rows = self.forward_rows()?;
                let m = confusion_and_metrics(&rows, cfg.thresholds.operating);
                self.write("forward_walk", &forward_walk_table(&rows), out)?;
                self.write("forward_walk_metrics", &metrics_table("AMRS", &m), out)?;
            }
            EvalMode::Thresholds => {
                let rows = self.forward_rows()?;
                let sweep = threshold_sweep(&rows, &cfg.thresholds.sweep);
                self.write("thresholds", &threshold_table(&sweep), out)?;
            }
            EvalMode::Prospective => self.prospective(out)?,
            EvalMode::LeadTime => {
                let mut events: Vec<GroundTruthLabel> =
                    self.labels()?.iter().filter(|l| l.is_positive()).cloned().collect();
                events.sort_by(|a, b| (&a.ticker, a.date).cmp(&(&b.ticker, b.date)));
                let mut records = Vec::new();
                for e in events {
                    let scored = self.scored(&e.ticker)?;
                    records.push(lead_time(scored, e.date, cfg.thresholds.alert, cfg.lead_time.lookback)?);
                }
                self.write("lead_time", &lead_time_table(&records), out)?;
            }
            EvalMode::Baselines => {
                let cs = self.case_study(mode)?;
                let scored = self.scored(&cs.ticker)?;
                let rows = baseline_comparison(scored, &cs.window(), &cfg.baselines)?;
                self.write("baselines", &baseline_table(&rows), out)?;
            }
            EvalMode::Ablation => {
                let cs = self.case_study(mode)?;
                let (from, to) = cs.ablation_span();
                let scored = self.scored(&cs.ticker)?;
                let span: Vec<ScoredWindow> = scored
                    .iter()
                    .filter(|s| from <= s.window.date && s.window.date <= to)
                    .cloned()
                    .collect();
                let rows = ablation_run(&span, &cfg.scoring.weights, &standard_ablations(), cfg.thresholds.high_risk)?;
                self.write("ablation", &ablation_table(&rows), out)?;
            }
            EvalMode::Weights => {
                let cs = self.case_study(mode)?;
                let window = cs.window();
                let scored = self.scored(&cs.ticker)?;
                let span: Vec<ScoredWindow> =
                    scored.iter().filter(|s| window.contains(s.window.date)).cloned().collect();
                let labels: Vec<(usize, bool)> = span
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (i, window.is_positive(s.window.date)))
                    .collect();
                let rows = weight_sensitivity(&span, &cfg.scoring.weights, &cfg.sensitivity, Some(&labels))?;
                self.write("weights", &sensitivity_table(&rows), out)?;
            }
        }
        Ok(())
    }

    /// Replays the daily logging job for every ticker, appends entries newer
    /// than the log's last one, then joins the whole log with the labels.
    fn prospective(&mut self, out: &mut dyn Write) -> Result<(), CliError> {
        let cfg = self.cfg;
        let p = ProspectiveConfig {
            threshold: cfg.thresholds.operating,
            model_version: cfg.model_version.clone(),
            run_id: cfg.prospective.run_id.clone(),
            history_days: cfg.prospective.history_days,
            from: cfg.prospective.from,
            to: cfg.prospective.to,
        };
        let mut entries: Vec<PredictionLogEntry> = Vec::new();
        for t in &cfg.tickers {
            let fused: Vec<FusedWindow> = read_stage(&self.store, t, "ingest")?;
            entries.extend(prospective_replay(&fused, &cfg.scoring, &p)?);
        }
        entries.sort_by(|a, b| (a.timestamp, &a.ticker).cmp(&(b.timestamp, &b.ticker)));
        let mut log = PredictionLog::open(cfg.prediction_log_path())?;
        if let Some(last) = log.last_timestamp() {
            entries.retain(|e| e.timestamp > last);
        }
        log.append_all(&entries)?;
        say(
            out,
            &format!("appended {} predictions to {}\n", entries.len(), log.path().display()),
        )?;
        let logged = PredictionLog::read(log.path())?;
        let rows = join_log_with_labels(&logged, self.labels()?);
        let m = confusion_and_metrics(&rows, cfg.thresholds.operating);
        self.write("prospective", &forward_walk_table(&rows), out)?;
        self.write("prospective_metrics", &metrics_table("AMRS (prospective)", &m), out)
    }
}

/// Runs one evaluation mode (or all of them) and writes its CSV reports.
pub fn evaluate(cfg: &RunConfig, mode: EvalMode, out: &mut dyn Write) -> Result<(), CliError> {
    let mut ctx = EvalContext {
        cfg,
        store: cfg.store(),
        labels: None,
        scored: BTreeMap::new(),
    };
    ctx.run(mode, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_names_round_trip() {
        for m in EvalMode::EACH {
            assert_eq!(EvalMode::from_name(m.name()), Some(m));
            assert!(!m.reports().is_empty());
            assert_eq!(EvalMode::from_str(m.name(), false).unwrap(), m);
        }
        assert_eq!(EvalMode::from_name("all"), None);
        assert!(EvalMode::from_str("bogus", false).is_err());
    }

    #[test]
    fn summary_lists_suspicious_days() {
        assert_eq!(score_summary("X", &[]), "X: 0 rows, max risk -, 0 high-risk days, suspicious: none\n");
    }
}
