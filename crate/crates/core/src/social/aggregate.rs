//! Per ticker-day social aggregates on the trading-day axis.

use std::collections::BTreeMap;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::bot::{daily_bot_aggregates, AuthorIndex, BotParams};
use super::coordination::{coordination_score, CoordinationParams};
use super::sentiment::{combined_sentiment, Lexicon, SentimentWeights};
use super::SocialError;
use crate::calendar::TradingCalendar;
use crate::ingest::PostRecord;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SocialParams {
    pub sentiment: SentimentWeights,
    pub bot: BotParams,
    pub coordination: CoordinationParams,
}

impl SocialParams {
    pub fn validate(&self) -> Result<(), SocialError> {
        self.sentiment.validate()?;
        self.bot.validate()?;
        self.coordination.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DailySocialFeatures {
    pub ticker: String,
    pub date: NaiveDate,
    pub social_volume: u64,
    pub unique_authors: u64,
    pub avg_sentiment: f64,
    pub avg_bot_score: f64,
    pub bot_heavy_post_ratio: f64,
    pub coordination_score: f64,
}

impl DailySocialFeatures {
    pub fn empty(ticker: &str, date: NaiveDate) -> Self {
        Self {
            ticker: ticker.to_string(),
            date,
            social_volume: 0,
            unique_authors: 0,
            avg_sentiment: 0.0,
            avg_bot_score: 0.0,
            bot_heavy_post_ratio: 0.0,
            coordination_score: 0.0,
        }
    }
}

/// Fills `lexicon_sentiment` on every post that lacks it.
pub fn score_post_sentiment(posts: &mut [PostRecord], lexicon: &Lexicon) {
    for p in posts.iter_mut().filter(|p| p.lexicon_sentiment.is_none()) {
        p.lexicon_sentiment = Some(lexicon.score(&p.text));
    }
}

/// Aggregates one ticker-day. Posts are put in canonical order first so the
/// result does not depend on input order.
pub fn aggregate_social_day(
    ticker: &str,
    date: NaiveDate,
    posts: &[&PostRecord],
    authors: &AuthorIndex,
    lexicon: &Lexicon,
    params: &SocialParams,
) -> Result<DailySocialFeatures, SocialError> {
    if posts.is_empty() {
        return Ok(DailySocialFeatures::empty(ticker, date));
    }
    let mut ordered = posts.to_vec();
    ordered.sort_by(|a, b| a.timestamp.cmp(&b.timestamp).then_with(|| a.post_id.cmp(&b.post_id)));

    let mut sentiment_sum = 0.0;
    for p in &ordered {
        let lex = match p.lexicon_sentiment {
            Some(v) => v,
            None => lexicon.score(&p.text),
        };
        sentiment_sum += combined_sentiment(lex, p.aux_sentiment, &params.sentiment)?;
    }
    let n = ordered.len();
    let mut author_ids: Vec<&str> = ordered.iter().map(|p| p.author_id.as_str()).collect();
    author_ids.sort_unstable();
    author_ids.dedup();
    let (avg_bot_score, bot_heavy_post_ratio) = daily_bot_aggregates(&ordered, authors, &params.bot)?;

    Ok(DailySocialFeatures {
        ticker: ticker.to_string(),
        date,
        social_volume: n as u64,
        unique_authors: author_ids.len() as u64,
        avg_sentiment: (sentiment_sum / n as f64).clamp(-1.0, 1.0),
        avg_bot_score,
        bot_heavy_post_ratio,
        coordination_score: coordination_score(&ordered, &params.coordination),
    })
}

/// The trading day a post counts towards: its own date if the market was
/// open, else the next session. `None` after the calendar's last day.
pub fn assign_trading_day(post: &PostRecord, calendar: &TradingCalendar) -> Option<NaiveDate> {
    calendar.on_or_after(post.calendar_date())
}

/// Groups posts by assigned trading day, keeping only calendar days.
pub fn group_by_trading_day<'a>(
    posts: &'a [PostRecord],
    calendar: &TradingCalendar,
) -> BTreeMap<NaiveDate, Vec<&'a PostRecord>> {
    let mut groups: BTreeMap<NaiveDate, Vec<&PostRecord>> = BTreeMap::new();
    for p in posts {
        if let Some(day) = assign_trading_day(p, calendar) {
            groups.entry(day).or_default().push(p);
        }
    }
    groups
}

/// One row per calendar trading day; weekend and holiday posts roll forward
/// to the next session and days without posts are all-zero.
pub fn aggregate_social_by_trading_day(
    ticker: &str,
    posts: &[PostRecord],
    authors: &AuthorIndex,
    calendar: &TradingCalendar,
    lexicon: &Lexicon,
    params: &SocialParams,
) -> Result<Vec<DailySocialFeatures>, SocialError> {
    params.validate()?;
    let groups = group_by_trading_day(posts, calendar);
    calendar
        .days()
        .iter()
        .map(|&day| match groups.get(&day) {
            Some(day_posts) => aggregate_social_day(ticker, day, day_posts, authors, lexicon, params),
            None => Ok(DailySocialFeatures::empty(ticker, day)),
        })
        .collect()
}
