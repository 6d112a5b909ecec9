//! Per-post sentiment, per-author bot-likeness and per-day social aggregates.

pub mod aggregate;
pub mod bot;
pub mod coordination;
pub mod sentiment;
pub mod tfidf;

use std::path::PathBuf;

use thiserror::Error;

pub use aggregate::{
    aggregate_social_by_trading_day, aggregate_social_day, assign_trading_day, score_post_sentiment,
    DailySocialFeatures, SocialParams,
};
pub use bot::{author_bot_score, daily_bot_aggregates, index_authors, AuthorIndex, BotParams};
pub use coordination::{coordination_of_texts, coordination_score, CoordinationParams};
pub use sentiment::{combined_sentiment, lexicon_sentiment, AuxSentimentScorer, Lexicon, SentimentWeights};
pub use tfidf::{cosine, tfidf_vectors, SparseVector};

#[derive(Debug, Error)]
pub enum SocialError {
    #[error("{name} sentiment {value} outside [-1, 1]")]
    OutOfRangeInput { name: &'static str, value: f64 },
    #[error("no author stats for `{0}`")]
    UnknownAuthor(String),
    #[error("invalid social parameters: {0}")]
    InvalidParams(String),
    #[error("lexicon line {line}: {reason}")]
    Lexicon { line: usize, reason: String },
    #[error("{path}: {source}")]
    LexiconIo {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
