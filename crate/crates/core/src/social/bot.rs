//! Heuristic author bot-likeness.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::SocialError;
use crate::ingest::{AuthorStats, PostRecord};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BotParams {
    /// Weight of the posting-frequency indicator.
    pub w_f: f64,
    /// Weight of the low-diversity indicator.
    pub w_d: f64,
    /// Posts per active day above which an author looks automated.
    pub tau_f: f64,
    /// Subreddit count below which an author looks single-purpose.
    pub tau_d: f64,
    /// Authors scoring strictly above this are counted as bot-heavy.
    pub bot_flag_cutoff: f64,
}

impl Default for BotParams {
    fn default() -> Self {
        Self {
            w_f: 0.7,
            w_d: 0.3,
            tau_f: 10.0,
            tau_d: 3.0,
            bot_flag_cutoff: 0.5,
        }
    }
}

impl BotParams {
    pub fn validate(&self) -> Result<(), SocialError> {
        let ok = self.w_f >= 0.0
            && self.w_d >= 0.0
            && ((self.w_f + self.w_d) - 1.0).abs() <= 1e-9
            && self.tau_f > 0.0
            && self.tau_d > 0.0
            && (0.0..=1.0).contains(&self.bot_flag_cutoff);
        if ok {
            Ok(())
        } else {
            Err(SocialError::InvalidParams(format!("invalid bot params {self:?}")))
        }
    }
}

/// `w_f·[f > tau_f] + w_d·[d < tau_d]`.
pub fn author_bot_score(stats: &AuthorStats, p: &BotParams) -> f64 {
    let mut b = 0.0;
    if stats.posts_per_active_day > p.tau_f {
        b += p.w_f;
    }
    if (stats.subreddit_diversity as f64) < p.tau_d {
        b += p.w_d;
    }
    b
}

/// Author id → stats lookup.
pub type AuthorIndex = HashMap<String, AuthorStats>;

pub fn index_authors(stats: &[AuthorStats]) -> AuthorIndex {
    stats.iter().map(|s| (s.author_id.clone(), s.clone())).collect()
}

/// `(avg_bot_score, bot_heavy_post_ratio)` for one day's posts; `(0, 0)` when empty.
pub fn daily_bot_aggregates(
    posts: &[&PostRecord],
    authors: &AuthorIndex,
    p: &BotParams,
) -> Result<(f64, f64), SocialError> {
    if posts.is_empty() {
        return Ok((0.0, 0.0));
    }
    let mut sum = 0.0;
    let mut heavy = 0usize;
    for post in posts {
        let stats = authors
            .get(&post.author_id)
            .ok_or_else(|| SocialError::UnknownAuthor(post.author_id.clone()))?;
        let b = author_bot_score(stats, p);
        sum += b;
        if b > p.bot_flag_cutoff {
            heavy += 1;
        }
    }
    let n = posts.len() as f64;
    Ok((sum / n, heavy as f64 / n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::{TimeZone, Utc};

    fn stats(id: &str, f: f64, d: u64) -> AuthorStats {
        AuthorStats {
            author_id: id.into(),
            total_posts: 100,
            active_days: 1,
            posts_per_active_day: f,
            subreddit_diversity: d,
        }
    }

    fn post(author: &str) -> PostRecord {
        PostRecord {
            post_id: author.into(),
            ticker: "GME".into(),
            timestamp: Utc.with_ymd_and_hms(2021, 1, 4, 12, 0, 0).unwrap(),
            author_id: author.into(),
            subreddit: "wallstreetbets".into(),
            text: "x".into(),
            lexicon_sentiment: None,
            aux_sentiment: None,
        }
    }

    #[test]
    fn score_examples() {
        let p = BotParams::default();
        assert_eq!(author_bot_score(&stats("a", 15.0, 2), &p), 1.0);
        assert_eq!(author_bot_score(&stats("a", 5.0, 5), &p), 0.0);
        assert_eq!(author_bot_score(&stats("a", 12.0, 4), &p), 0.7);
        assert_eq!(author_bot_score(&stats("a", 10.0, 3), &p), 0.0);
        assert_eq!(author_bot_score(&stats("a", 1.0, 1), &p), 0.3);
    }

    #[test]
    fn daily_examples() {
        let p = BotParams::default();
        let idx = index_authors(&[
            stats("bot", 15.0, 1),
            stats("human", 1.0, 5),
            stats("freq", 12.0, 4),
            stats("niche", 1.0, 1),
        ]);
        let posts = [post("bot"), post("bot"), post("human"), post("human")];
        let refs: Vec<_> = posts.iter().collect();
        assert_eq!(daily_bot_aggregates(&refs, &idx, &p).unwrap(), (0.5, 0.5));

        let posts = [post("freq"), post("niche"), post("niche")];
        let refs: Vec<_> = posts.iter().collect();
        let (avg, ratio) = daily_bot_aggregates(&refs, &idx, &p).unwrap();
        assert!((avg - 1.3 / 3.0).abs() < 1e-12);
        assert_eq!(ratio, 1.0 / 3.0);

        assert_eq!(daily_bot_aggregates(&[], &idx, &p).unwrap(), (0.0, 0.0));
        let ghost = post("ghost");
        assert!(matches!(
            daily_bot_aggregates(&[&ghost], &idx, &p),
            Err(SocialError::UnknownAuthor(a)) if a == "ghost"
        ));
    }

    #[test]
    fn cutoff_is_strict() {
        let p = BotParams {
            w_f: 0.5,
            w_d: 0.5,
            ..BotParams::default()
        };
        let idx = index_authors(&[stats("half", 20.0, 5)]);
        let only = post("half");
        assert_eq!(daily_bot_aggregates(&[&only], &idx, &p).unwrap(), (0.5, 0.0));
    }
}
