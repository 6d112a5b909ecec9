//! Seeded synthetic post corpora and market fixtures.
//!
//! Daily post counts are Poisson around `base_posts_per_day` (scaled down on
//! weekends, multiplied inside event windows). Inside an event window each
//! post is independently templated with probability `template_fraction`
//! (drawn from a pool of ten near-duplicate campaign strings with ticker and
//! price-target slots) and bot-authored with probability
//! `bot_author_fraction`. Bot accounts post in a single subreddit and carry
//! at least twelve posts on every day their window emits twelve or more bot
//! posts, so they clear the default bot thresholds. Organic authors follow a
//! Zipf-like activity distribution over a fixed pool.
//!
//! All randomness comes from a ChaCha8 stream seeded from `seed` and the
//! ticker symbol, so output is bit-identical for a given config.

use std::path::Path;

use chrono::{NaiveDate, TimeZone, Utc};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use super::ohlcv::OhlcvBar;
use super::posts::{compute_author_stats, AuthorStats, PostRecord};
use super::IngestError;
use crate::calendar::{is_weekend, us_trading_days};

pub const DEFAULT_SEED: u64 = 42;

/// Posts per day a single bot account is given once its window is busy enough.
const BOT_POSTS_PER_ACCOUNT: usize = 12;

const SUBREDDITS: [&str; 8] = [
    "wallstreetbets",
    "stocks",
    "investing",
    "options",
    "stockmarket",
    "pennystocks",
    "superstonk",
    "valueinvesting",
];

const NEUTRAL_WORDS: &[&str] = &[
    "shares", "price", "market", "today", "earnings", "call", "calls", "puts", "options", "volume",
    "chart", "week", "position", "float", "short", "interest", "analyst", "report", "guidance",
    "quarter", "revenue", "open", "close", "trading", "retail", "fund", "hedge", "funds", "dd",
    "thread", "daily", "discussion", "ticker", "strike", "expiry", "premium", "ceo", "company",
    "management", "sector", "index", "etf", "dividend", "yield", "valuation", "pe", "ratio",
    "balance", "sheet", "debt", "cash", "flow", "margin", "broker", "order", "limit", "stop",
    "account", "portfolio", "watchlist", "entry", "exit", "level", "support", "resistance",
    "trend", "line", "candle", "after", "hours", "premarket", "futures", "fed", "rates",
    "inflation", "news", "filing", "sec", "institutional", "ownership", "insider", "friday",
    "monday", "next", "last", "year", "month", "into", "with", "about", "what", "think", "anyone",
    "know", "why", "is", "the", "a", "of", "on", "for", "and", "my", "this", "it", "at", "just",
    "still", "why", "are", "you", "guys", "see", "looks", "like", "again", "ever", "more",
];

const POSITIVE_WORDS: &[&str] = &[
    "good", "great", "bullish", "strong", "gains", "win", "love", "rally", "breakout", "solid",
    "profit", "beat", "undervalued", "excellent", "nice", "upside", "growth", "winning",
];

const NEGATIVE_WORDS: &[&str] = &[
    "bad", "bearish", "crash", "dump", "loss", "weak", "terrible", "overvalued", "fraud", "scam",
    "plunge", "drop", "fear", "worst", "risky", "panic", "losses", "downside",
];

/// Near-duplicate campaign messages. `{T}` is the ticker, `{P}` the window's
/// price target. Variants 0-3 and 6-7 tokenize identically within their
/// families; the rest differ by a word or two.
const TEMPLATES: [&str; 10] = [
    "{T} to the moon 🚀🚀 hold the line, we are not selling until {P}!!",
    "{T} TO THE MOON 🚀 HOLD THE LINE we are NOT selling until {P}",
    "${T} to the moon... hold the line. we are not selling until {P} 💎🙌",
    "{T} to the moon! hold the line! We are not selling until ${P}",
    "{T} to the moon hold the line we are not selling until {P} apes together strong",
    "{T} 🚀 to the moon, hold the line, we're not selling until {P}",
    "buy {T} now, hold the line, short squeeze incoming, target {P}",
    "BUY {T} NOW hold the line short squeeze incoming target {P} 🚀",
    "{T} short squeeze incoming, buy and hold, target {P}",
    "apes together strong: {T} to the moon, not selling until {P}",
];

const PRICE_TARGETS: [&str; 5] = ["1000", "500", "420", "69420", "10k"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventWindow {
    pub start: NaiveDate,
    pub end: NaiveDate,
    pub volume_multiplier: f64,
    pub template_fraction: f64,
    pub bot_author_fraction: f64,
    pub sentiment_shift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticScenarioConfig {
    pub ticker: String,
    pub start: NaiveDate,
    pub end: NaiveDate,
    pub base_posts_per_day: f64,
    #[serde(default)]
    pub event_windows: Vec<EventWindow>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Size of the organic author pool.
    #[serde(default = "default_organic_authors")]
    pub organic_authors: usize,
    /// Multiplier on the posting rate for Saturdays and Sundays.
    #[serde(default = "default_weekend_activity")]
    pub weekend_activity: f64,
    /// Mean lean of organic sentiment words outside events, in `[-1, 1]`.
    #[serde(default = "default_baseline_sentiment")]
    pub baseline_sentiment: f64,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}
fn default_organic_authors() -> usize {
    250
}
fn default_weekend_activity() -> f64 {
    0.3
}
fn default_baseline_sentiment() -> f64 {
    0.1
}

impl SyntheticScenarioConfig {
    /// A scenario with no events and default generator knobs.
    pub fn new(ticker: &str, start: NaiveDate, end: NaiveDate, base_posts_per_day: f64) -> Self {
        Self {
            ticker: ticker.to_string(),
            start,
            end,
            base_posts_per_day,
            event_windows: Vec::new(),
            seed: DEFAULT_SEED,
            organic_authors: default_organic_authors(),
            weekend_activity: default_weekend_activity(),
            baseline_sentiment: default_baseline_sentiment(),
        }
    }

    pub fn validate(&self) -> Result<(), IngestError> {
        let fail = |m: String| Err(IngestError::InvalidConfig(format!("{}: {m}", self.ticker)));
        if self.ticker.trim().is_empty() {
            return fail("empty ticker".into());
        }
        if self.start > self.end {
            return fail(format!("start {} after end {}", self.start, self.end));
        }
        if !(self.base_posts_per_day.is_finite() && self.base_posts_per_day > 0.0) {
            return fail(format!("base_posts_per_day must be > 0, got {}", self.base_posts_per_day));
        }
        if self.organic_authors == 0 {
            return fail("organic_authors must be >= 1".into());
        }
        if !(0.0..=1.0).contains(&self.weekend_activity) {
            return fail(format!("weekend_activity {} outside [0, 1]", self.weekend_activity));
        }
        if !(-1.0..=1.0).contains(&self.baseline_sentiment) {
            return fail(format!("baseline_sentiment {} outside [-1, 1]", self.baseline_sentiment));
        }
        for (i, w) in self.event_windows.iter().enumerate() {
            if w.start > w.end || w.start < self.start || w.end > self.end {
                return fail(format!("event window {i} [{}, {}] not inside date range", w.start, w.end));
            }
            if !(w.volume_multiplier.is_finite() && w.volume_multiplier >= 1.0) {
                return fail(format!("event window {i}: volume_multiplier must be >= 1"));
            }
            for (name, v) in [
                ("template_fraction", w.template_fraction),
                ("bot_author_fraction", w.bot_author_fraction),
            ] {
                if !(0.0..=1.0).contains(&v) {
                    return fail(format!("event window {i}: {name} {v} outside [0, 1]"));
                }
            }
            if !(-1.0..=1.0).contains(&w.sentiment_shift) {
                return fail(format!("event window {i}: sentiment_shift outside [-1, 1]"));
            }
        }
        Ok(())
    }

    /// First event window covering `day`, with its index.
    pub fn event_at(&self, day: NaiveDate) -> Option<(usize, &EventWindow)> {
        self.event_windows
            .iter()
            .enumerate()
            .find(|(_, w)| w.start <= day && day <= w.end)
    }
}

/// Generated posts (sorted by timestamp) and per-author stats over them.
#[derive(Debug, Clone, PartialEq)]
pub struct SocialCorpus {
    pub posts: Vec<PostRecord>,
    pub authors: Vec<AuthorStats>,
}

/// FNV-1a over the ticker, folded into the seed so tickers get independent streams.
fn mix_seed(seed: u64, ticker: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in ticker.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    seed ^ h
}

struct OrganicAuthors {
    ids: Vec<String>,
    home_subreddits: Vec<Vec<&'static str>>,
    activity: WeightedIndex<f64>,
}

impl OrganicAuthors {
    fn new(rng: &mut ChaCha8Rng, ticker: &str, n: usize) -> Self {
        let prefix = ticker.to_lowercase();
        let ids = (0..n).map(|k| format!("{prefix}_user{k:04}")).collect();
        let home_subreddits = (0..n)
            .map(|_| {
                let count = rng.random_range(1..=4);
                rand::seq::index::sample(rng, SUBREDDITS.len(), count)
                    .into_iter()
                    .map(|i| SUBREDDITS[i])
                    .collect()
            })
            .collect();
        let weights: Vec<f64> = (0..n).map(|k| 1.0 / ((k + 1) as f64).powf(1.1)).collect();
        let activity = WeightedIndex::new(weights).expect("non-empty positive weights");
        Self {
            ids,
            home_subreddits,
            activity,
        }
    }
}

fn organic_text(rng: &mut ChaCha8Rng, ticker: &str, bias: f64) -> String {
    let len = rng.random_range(8..=16);
    let mut words: Vec<String> = (0..len)
        .map(|_| NEUTRAL_WORDS[rng.random_range(0..NEUTRAL_WORDS.len())].to_string())
        .collect();
    let n_sentiment = match rng.random::<f64>() {
        x if x < 0.35 => 0,
        x if x < 0.80 => 1,
        _ => 2,
    };
    let p_pos = (0.5 + 0.5 * bias).clamp(0.0, 1.0);
    for _ in 0..n_sentiment {
        let positive = rng.random::<f64>() < p_pos;
        let pool = if positive { POSITIVE_WORDS } else { NEGATIVE_WORDS };
        let mut w = pool[rng.random_range(0..pool.len())].to_string();
        // An occasional negated opposite keeps the lexicon's negation rule exercised.
        if rng.random::<f64>() < 0.08 {
            let opposite = if positive { NEGATIVE_WORDS } else { POSITIVE_WORDS };
            w = format!("not {}", opposite[rng.random_range(0..opposite.len())]);
        }
        let at = rng.random_range(0..=words.len());
        words.insert(at, w);
    }
    let at = rng.random_range(0..=words.len());
    words.insert(at, format!("${ticker}"));
    words.join(" ")
}

fn template_text(rng: &mut ChaCha8Rng, ticker: &str, window: usize) -> String {
    // Zipf-like popularity: the campaign's lead variants dominate.
    let popularity = WeightedIndex::new((1..=TEMPLATES.len()).map(|i| 1.0 / i as f64))
        .expect("positive weights");
    let k = popularity.sample(rng);
    TEMPLATES[k]
        .replace("{T}", ticker)
        .replace("{P}", PRICE_TARGETS[window % PRICE_TARGETS.len()])
}

struct Draft {
    secs: u32,
    author: Option<usize>,
    text: String,
    subreddit: &'static str,
}

/// Generates a deterministic post corpus for one ticker.
pub fn generate_synthetic_social(config: &SyntheticScenarioConfig) -> Result<SocialCorpus, IngestError> {
    config.validate()?;
    let ticker = config.ticker.as_str();
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(config.seed, ticker));
    let authors = OrganicAuthors::new(&mut rng, ticker, config.organic_authors);
    let bot_prefix = format!("bot-{}", ticker.to_lowercase());

    let mut posts = Vec::new();
    for day in config.start.iter_days().take_while(|d| *d <= config.end) {
        let event = config.event_at(day);
        let mut rate = config.base_posts_per_day * event.map_or(1.0, |(_, w)| w.volume_multiplier);
        if is_weekend(day) {
            rate *= config.weekend_activity;
        }
        let n = if rate > 0.0 {
            let poisson = Poisson::new(rate).map_err(|e| IngestError::InvalidConfig(e.to_string()))?;
            poisson.sample(&mut rng) as usize
        } else {
            0
        };
        let bias = config.baseline_sentiment + event.map_or(0.0, |(_, w)| w.sentiment_shift);

        let mut drafts = Vec::with_capacity(n);
        for _ in 0..n {
            let secs = rng.random_range(0..86_400u32);
            let (templated, bot) = match event {
                Some((_, w)) => (
                    rng.random::<f64>() < w.template_fraction,
                    rng.random::<f64>() < w.bot_author_fraction,
                ),
                None => (false, false),
            };
            let text = match (templated, event) {
                (true, Some((wi, _))) => template_text(&mut rng, ticker, wi),
                _ => organic_text(&mut rng, ticker, bias),
            };
            let (author, subreddit) = if bot {
                (None, SUBREDDITS[0])
            } else {
                let a = authors.activity.sample(&mut rng);
                let homes = &authors.home_subreddits[a];
                (Some(a), homes[rng.random_range(0..homes.len())])
            };
            drafts.push(Draft {
                secs,
                author,
                text,
                subreddit,
            });
        }

        let n_bot = drafts.iter().filter(|d| d.author.is_none()).count();
        let n_accounts = (n_bot / BOT_POSTS_PER_ACCOUNT).max(1);
        let window = event.map_or(0, |(wi, _)| wi);
        let mut bot_seq = 0usize;
        let day_start = Utc.from_utc_datetime(&day.and_hms_opt(0, 0, 0).expect("midnight"));
        let mut day_posts: Vec<PostRecord> = drafts
            .into_iter()
            .map(|d| {
                let author_id = match d.author {
                    Some(a) => authors.ids[a].clone(),
                    None => {
                        let j = bot_seq % n_accounts;
                        bot_seq += 1;
                        format!("{bot_prefix}-w{window}-{j:02}")
                    }
                };
                PostRecord {
                    post_id: String::new(),
                    ticker: ticker.to_string(),
                    timestamp: day_start + chrono::Duration::seconds(d.secs as i64),
                    author_id,
                    subreddit: d.subreddit.to_string(),
                    text: d.text,
                    lexicon_sentiment: None,
                    aux_sentiment: None,
                }
            })
            .collect();
        day_posts.sort_by_key(|p| p.timestamp);
        for (i, p) in day_posts.iter_mut().enumerate() {
            p.post_id = format!("{}-{}-{i:04}", ticker, day.format("%Y%m%d"));
        }
        posts.extend(day_posts);
    }

    let authors = compute_author_stats(&posts);
    Ok(SocialCorpus { posts, authors })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarketShock {
    pub start: NaiveDate,
    pub end: NaiveDate,
    /// Mean log return per trading day inside the shock.
    #[serde(default)]
    pub daily_drift: f64,
    #[serde(default = "one")]
    pub volatility_multiplier: f64,
    #[serde(default = "one")]
    pub volume_multiplier: f64,
}

fn one() -> f64 {
    1.0
}

/// Geometric-random-walk OHLCV fixture on the US trading calendar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarketScenarioConfig {
    pub ticker: String,
    pub start: NaiveDate,
    pub end: NaiveDate,
    pub start_price: f64,
    /// Standard deviation of daily log returns.
    pub daily_volatility: f64,
    pub base_volume: f64,
    /// Lognormal sigma of the daily volume noise.
    #[serde(default = "default_volume_noise")]
    pub volume_noise: f64,
    #[serde(default)]
    pub shocks: Vec<MarketShock>,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_volume_noise() -> f64 {
    0.25
}

fn round_cents(x: f64) -> f64 {
    ((x * 100.0).round() / 100.0).max(0.01)
}

/// Generates bars for every US trading day in the configured range.
pub fn generate_synthetic_market(cfg: &MarketScenarioConfig) -> Result<Vec<OhlcvBar>, IngestError> {
    let invalid = |m: &str| Err(IngestError::InvalidConfig(format!("{}: {m}", cfg.ticker)));
    if cfg.start > cfg.end {
        return invalid("start after end");
    }
    if !(cfg.start_price > 0.0 && cfg.daily_volatility >= 0.0 && cfg.base_volume >= 0.0) {
        return invalid("start_price must be > 0, volatility and volume >= 0");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, &cfg.ticker).rotate_left(17));
    let mut prev_close = cfg.start_price;
    let mut bars = Vec::new();
    for date in us_trading_days(cfg.start, cfg.end) {
        let shock = cfg.shocks.iter().find(|s| s.start <= date && date <= s.end);
        let drift = shock.map_or(0.0, |s| s.daily_drift);
        let sigma = cfg.daily_volatility * shock.map_or(1.0, |s| s.volatility_multiplier);
        let vol_mult = shock.map_or(1.0, |s| s.volume_multiplier);
        let z: [f64; 5] = std::array::from_fn(|_| rng.sample(StandardNormal));

        let open = round_cents(prev_close * (0.3 * sigma * z[0]).exp());
        let close = round_cents(prev_close * (drift + sigma * z[1]).exp());
        let high = round_cents(open.max(close) * (0.5 * sigma * z[2].abs()).exp()).max(open.max(close));
        let low = round_cents(open.min(close) * (-0.5 * sigma * z[3].abs()).exp()).min(open.min(close));
        let nz = cfg.volume_noise;
        let volume = (cfg.base_volume * vol_mult * (nz * z[4] - 0.5 * nz * nz).exp()).round();
        bars.push(OhlcvBar {
            ticker: cfg.ticker.clone(),
            date,
            open,
            high,
            low,
            close,
            adj_close: close,
            volume,
        });
        prev_close = close;
    }
    Ok(bars)
}

/// Scenario definitions: `[[social]]` and `[[market]]` tables in TOML.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScenarioFile {
    #[serde(default)]
    pub social: Vec<SyntheticScenarioConfig>,
    #[serde(default)]
    pub market: Vec<MarketScenarioConfig>,
}

impl ScenarioFile {
    pub fn social_for(&self, ticker: &str) -> Option<&SyntheticScenarioConfig> {
        self.social.iter().find(|s| s.ticker == ticker)
    }

    pub fn market_for(&self, ticker: &str) -> Option<&MarketScenarioConfig> {
        self.market.iter().find(|s| s.ticker == ticker)
    }
}

pub fn load_scenario_file(path: impl AsRef<Path>) -> Result<ScenarioFile, IngestError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let file: ScenarioFile = toml::from_str(&text)
        .map_err(|e| IngestError::InvalidConfig(format!("{}: {e}", path.display())))?;
    for s in &file.social {
        s.validate()?;
    }
    Ok(file)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    fn event_config() -> SyntheticScenarioConfig {
        let mut c = SyntheticScenarioConfig::new("GME", d("2021-01-01"), d("2021-03-31"), 20.0);
        c.event_windows.push(EventWindow {
            start: d("2021-02-01"),
            end: d("2021-02-14"),
            volume_multiplier: 10.0,
            template_fraction: 0.6,
            bot_author_fraction: 0.4,
            sentiment_shift: 0.3,
        });
        c
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let c = event_config();
        let a = generate_synthetic_social(&c).unwrap();
        let b = generate_synthetic_social(&c).unwrap();
        assert_eq!(a, b);
        let mut other = c.clone();
        other.seed = 7;
        assert_ne!(generate_synthetic_social(&other).unwrap().posts, a.posts);
    }

    #[test]
    fn tiny_rate_is_valid() {
        let c = SyntheticScenarioConfig::new("X", d("2021-01-04"), d("2021-01-08"), 0.0001);
        let corpus = generate_synthetic_social(&c).unwrap();
        assert!(corpus.posts.len() <= 1);
        assert_eq!(corpus.authors.len(), corpus.posts.len().min(1));
    }

    #[test]
    fn invalid_configs_rejected() {
        let mut c = event_config();
        c.event_windows[0].template_fraction = 1.5;
        assert!(matches!(generate_synthetic_social(&c), Err(IngestError::InvalidConfig(_))));
        let mut c = event_config();
        c.event_windows[0].end = d("2021-05-01");
        assert!(c.validate().is_err());
        let mut c = event_config();
        c.base_posts_per_day = 0.0;
        assert!(c.validate().is_err());
        let mut c = event_config();
        c.event_windows[0].volume_multiplier = 0.5;
        assert!(c.validate().is_err());
    }

    #[test]
    fn post_ids_unique_and_sorted() {
        let corpus = generate_synthetic_social(&event_config()).unwrap();
        let mut ids: Vec<_> = corpus.posts.iter().map(|p| &p.post_id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), corpus.posts.len());
        assert!(corpus.posts.windows(2).all(|w| w[0].timestamp <= w[1].timestamp));
        assert!(corpus.posts.iter().all(|p| !p.text.is_empty()));
    }

    #[test]
    fn bot_accounts_clear_thresholds() {
        let corpus = generate_synthetic_social(&event_config()).unwrap();
        let bots: Vec<_> = corpus.authors.iter().filter(|a| a.author_id.starts_with("bot-")).collect();
        assert!(!bots.is_empty());
        for b in bots {
            assert!(b.posts_per_active_day > 10.0, "{b:?}");
            assert!(b.subreddit_diversity < 3);
        }
    }

    #[test]
    fn market_bars_valid_and_deterministic() {
        let cfg = MarketScenarioConfig {
            ticker: "GME".into(),
            start: d("2020-10-01"),
            end: d("2021-02-26"),
            start_price: 15.0,
            daily_volatility: 0.04,
            base_volume: 8e6,
            volume_noise: 0.3,
            shocks: vec![MarketShock {
                start: d("2021-01-13"),
                end: d("2021-01-27"),
                daily_drift: 0.2,
                volatility_multiplier: 3.0,
                volume_multiplier: 10.0,
            }],
            seed: 42,
        };
        let a = generate_synthetic_market(&cfg).unwrap();
        assert_eq!(a, generate_synthetic_market(&cfg).unwrap());
        for b in &a {
            b.validate().unwrap();
        }
        assert!(a.windows(2).all(|w| w[0].date < w[1].date));
    }
}
