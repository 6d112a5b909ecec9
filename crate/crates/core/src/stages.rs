//! Per-ticker stage construction: bars and a post corpus in, the persisted
//! raw-social, market and fused stages out.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::calendar::TradingCalendar;
use crate::ingest::store::{DatasetStore, StoreError};
use crate::ingest::{AuthorStats, OhlcvBar, PostRecord, StoredPost};
use crate::market::{market_days, MarketDay, RollingParams};
use crate::scoring::{fuse, score_pipeline, FusedWindow, ScoredWindow, ScoringConfig};
use crate::social::{
    aggregate_social_by_trading_day, assign_trading_day, index_authors, score_post_sentiment, Lexicon,
    SocialParams,
};
use crate::Result;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FeatureParams {
    pub social: SocialParams,
    pub rolling: RollingParams,
}

/// Everything ingestion persists for one ticker.
#[derive(Debug, Clone, PartialEq)]
pub struct TickerStages {
    pub ticker: String,
    pub posts: Vec<StoredPost>,
    pub market: Vec<MarketDay>,
    pub fused: Vec<FusedWindow>,
}

impl TickerStages {
    /// Posts in the corpus that map to no trading day.
    pub fn unassigned_posts(&self) -> usize {
        self.posts.iter().filter(|p| p.trading_day.is_none()).count()
    }

    pub fn write(&self, store: &DatasetStore) -> Result<(), StoreError> {
        store.write(&self.ticker, &self.posts)?;
        store.write(&self.ticker, &self.market)?;
        store.write(&self.ticker, &self.fused)?;
        Ok(())
    }
}

/// Builds the market features on the bars' own calendar, scores post
/// sentiment, aggregates posts onto trading days and fuses the two.
/// `authors` must cover every post author.
pub fn build_ticker_stages(
    ticker: &str,
    bars: &[OhlcvBar],
    posts: &[PostRecord],
    authors: &[AuthorStats],
    lexicon: &Lexicon,
    params: &FeatureParams,
) -> Result<TickerStages> {
    let market = market_days(bars, &params.rolling)?;
    let calendar = TradingCalendar::new(bars.iter().map(|b| b.date).collect());
    let mut posts = posts.to_vec();
    score_post_sentiment(&mut posts, lexicon);
    let index = index_authors(authors);
    let social = aggregate_social_by_trading_day(ticker, &posts, &index, &calendar, lexicon, &params.social)?;
    let fused = fuse(&social, &market)?;
    let stored = posts
        .iter()
        .map(|p| StoredPost::new(p, assign_trading_day(p, &calendar)))
        .collect();
    Ok(TickerStages {
        ticker: ticker.to_string(),
        posts: stored,
        market,
        fused,
    })
}

/// Reads the fused stage for each ticker.
pub fn read_fused(store: &DatasetStore, tickers: &[String]) -> Result<BTreeMap<String, Vec<FusedWindow>>> {
    tickers
        .iter()
        .map(|t| Ok((t.clone(), store.read::<FusedWindow>(t)?)))
        .collect()
}

/// Scores and persists one ticker's fused stage.
pub fn score_ticker(store: &DatasetStore, ticker: &str, cfg: &ScoringConfig) -> Result<Vec<ScoredWindow>> {
    let fused: Vec<FusedWindow> = store.read(ticker)?;
    let scored = score_pipeline(&fused, cfg)?;
    store.write(ticker, &scored)?;
    Ok(scored)
}
