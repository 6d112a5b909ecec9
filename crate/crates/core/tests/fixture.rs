//! Checks against the bundled seed-42 fixture and a constructed calm market.

mod support;

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use amrs_core::eval::{ablation_run, standard_ablations};
use amrs_core::ingest::{generate_synthetic_social, load_ohlcv, load_scenario_file, OhlcvBar, PostRecord};
use amrs_core::scoring::{score_pipeline, RiskLevel, ScoringConfig, WeightConfig};
use amrs_core::social::Lexicon;
use amrs_core::stages::{build_ticker_stages, FeatureParams};
use chrono::NaiveDate;
use support::*;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Bot-heavy ratio from first principles: per-author posts per active
/// calendar day and distinct subreddits over the whole corpus.
fn brute_bot_heavy(day_posts: &[&PostRecord], corpus: &[PostRecord]) -> f64 {
    let mut days: BTreeMap<&str, BTreeSet<NaiveDate>> = BTreeMap::new();
    let mut subs: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    let mut total: BTreeMap<&str, usize> = BTreeMap::new();
    for p in corpus {
        days.entry(&p.author_id).or_default().insert(p.timestamp.date_naive());
        subs.entry(&p.author_id).or_default().insert(&p.subreddit);
        *total.entry(&p.author_id).or_default() += 1;
    }
    let heavy = day_posts
        .iter()
        .filter(|p| {
            let a = p.author_id.as_str();
            let f = total[a] as f64 / days[a].len() as f64;
            let b = if f > 10.0 { 0.7 } else { 0.0 } + if subs[a].len() < 3 { 0.3 } else { 0.0 };
            b > 0.5
        })
        .count();
    heavy as f64 / day_posts.len() as f64
}

#[test]
fn gme_campaign_day_is_coordinated_and_bot_heavy() {
    let scenarios = load_scenario_file(fixtures().join("scenarios.toml")).unwrap();
    let mut sc = scenarios.social_for("GME").unwrap().clone();
    sc.seed = 42;
    let corpus = generate_synthetic_social(&sc).unwrap();
    let bars = load_ohlcv(fixtures().join("ohlcv/GME.csv"), "GME").unwrap();
    let stages = build_ticker_stages(
        "GME",
        &bars,
        &corpus.posts,
        &corpus.authors,
        Lexicon::bundled(),
        &FeatureParams::default(),
    )
    .unwrap();

    // Posts counted on Tue 2021-01-05 are those dated after Mon 01-04.
    let event = day(2021, 1, 5);
    let mut day_posts: Vec<&PostRecord> = corpus.posts.iter().filter(|p| p.timestamp.date_naive() == event).collect();
    day_posts.sort_by(|a, b| (a.timestamp, &a.post_id).cmp(&(b.timestamp, &b.post_id)));
    let recent: Vec<&str> = day_posts.iter().rev().take(200).rev().map(|p| p.text.as_str()).collect();
    let coord = coordination_oracle(&recent, 0.8, 1000);
    let bot = brute_bot_heavy(&day_posts, &corpus.posts);

    let row = stages.fused.iter().find(|w| w.date == event).unwrap();
    assert_eq!(row.social_volume as usize, day_posts.len());
    assert_eq!(row.coordination_score, coord);
    assert!((row.bot_heavy_post_ratio - bot).abs() < 1e-12);
    assert!(coord >= 0.2, "coordination {coord}");
    assert!(bot >= 0.3, "bot-heavy ratio {bot}");
}

/// Flat prices and volume, no posts.
fn calm_bars(n: usize) -> Vec<OhlcvBar> {
    amrs_core::calendar::us_trading_days(day(2021, 1, 4), day(2021, 12, 31))
        .into_iter()
        .take(n)
        .map(|date| OhlcvBar {
            ticker: "CALM".into(),
            date,
            open: 20.0,
            high: 20.0,
            low: 20.0,
            close: 20.0,
            adj_close: 20.0,
            volume: 1_000_000.0,
        })
        .collect()
}

#[test]
fn calm_market_is_low_risk_and_market_only_is_zero() {
    let stages =
        build_ticker_stages("CALM", &calm_bars(60), &[], &[], Lexicon::bundled(), &FeatureParams::default()).unwrap();
    let scored = score_pipeline(&stages.fused, &ScoringConfig::default()).unwrap();
    assert_eq!(scored.len(), 60);
    assert!(scored.iter().all(|s| s.risk_level == RiskLevel::Low && !s.is_suspicious));

    let rows = ablation_run(&scored, &WeightConfig::default(), &standard_ablations(), 0.5).unwrap();
    let market = rows.iter().find(|r| r.configuration == "Market Only").unwrap();
    assert_eq!((market.mean_score, market.max_score, market.high_risk_days), (0.0, 0.0, 0));
}
