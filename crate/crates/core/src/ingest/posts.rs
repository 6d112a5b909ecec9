//! Social posts and account-level activity aggregates.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, NaiveDate, Utc};
use serde::{Deserialize, Serialize};

use super::store::{col, ColumnDef, ColumnType, Stage, StageRow};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PostRecord {
    pub post_id: String,
    pub ticker: String,
    pub timestamp: DateTime<Utc>,
    pub author_id: String,
    pub subreddit: String,
    pub text: String,
    /// Lexicon score in `[-1, 1]`; `None` until the social stage scores it.
    pub lexicon_sentiment: Option<f64>,
    /// Optional second scorer output in `[-1, 1]` (e.g. a transformer model).
    pub aux_sentiment: Option<f64>,
}

impl PostRecord {
    pub fn calendar_date(&self) -> NaiveDate {
        self.timestamp.date_naive()
    }
}

/// A raw-social stage row: the post plus the trading day it counts towards
/// (`None` when it falls outside the market calendar).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredPost {
    pub post_id: String,
    pub ticker: String,
    pub timestamp: DateTime<Utc>,
    pub trading_day: Option<NaiveDate>,
    pub author_id: String,
    pub subreddit: String,
    pub text: String,
    pub lexicon_sentiment: Option<f64>,
    pub aux_sentiment: Option<f64>,
}

impl StoredPost {
    pub fn new(post: &PostRecord, trading_day: Option<NaiveDate>) -> Self {
        Self {
            post_id: post.post_id.clone(),
            ticker: post.ticker.clone(),
            timestamp: post.timestamp,
            trading_day,
            author_id: post.author_id.clone(),
            subreddit: post.subreddit.clone(),
            text: post.text.clone(),
            lexicon_sentiment: post.lexicon_sentiment,
            aux_sentiment: post.aux_sentiment,
        }
    }

    pub fn to_post(&self) -> PostRecord {
        PostRecord {
            post_id: self.post_id.clone(),
            ticker: self.ticker.clone(),
            timestamp: self.timestamp,
            author_id: self.author_id.clone(),
            subreddit: self.subreddit.clone(),
            text: self.text.clone(),
            lexicon_sentiment: self.lexicon_sentiment,
            aux_sentiment: self.aux_sentiment,
        }
    }
}

impl StageRow for StoredPost {
    const STAGE: Stage = Stage::RawSocial;
    fn schema() -> Vec<ColumnDef> {
        vec![
            col("post_id", ColumnType::Str),
            col("ticker", ColumnType::Str),
            col("timestamp", ColumnType::Datetime),
            col("trading_day", ColumnType::OptDate),
            col("author_id", ColumnType::Str),
            col("subreddit", ColumnType::Str),
            col("text", ColumnType::Str),
            col("lexicon_sentiment", ColumnType::OptF64),
            col("aux_sentiment", ColumnType::OptF64),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuthorStats {
    pub author_id: String,
    pub total_posts: u64,
    pub active_days: u64,
    pub posts_per_active_day: f64,
    pub subreddit_diversity: u64,
}

/// Aggregates per-author activity over the whole corpus, sorted by author id.
pub fn compute_author_stats(posts: &[PostRecord]) -> Vec<AuthorStats> {
    #[derive(Default)]
    struct Acc<'a> {
        total: u64,
        days: BTreeSet<NaiveDate>,
        subs: BTreeSet<&'a str>,
    }
    let mut by_author: BTreeMap<&str, Acc> = BTreeMap::new();
    for p in posts {
        let acc = by_author.entry(p.author_id.as_str()).or_default();
        acc.total += 1;
        acc.days.insert(p.calendar_date());
        acc.subs.insert(p.subreddit.as_str());
    }
    by_author
        .into_iter()
        .map(|(id, acc)| {
            let active_days = acc.days.len() as u64;
            AuthorStats {
                author_id: id.to_string(),
                total_posts: acc.total,
                active_days,
                posts_per_active_day: acc.total as f64 / active_days as f64,
                subreddit_diversity: acc.subs.len() as u64,
            }
        })
        .collect()
}
