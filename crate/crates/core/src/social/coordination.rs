//! Near-duplicate density: the fraction of post pairs whose TF-IDF cosine
//! similarity exceeds a threshold.

use serde::{Deserialize, Serialize};

use super::tfidf::tfidf_vectors;
use super::SocialError;
use crate::ingest::PostRecord;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CoordinationParams {
    pub similarity_threshold: f64,
    pub max_posts_sampled: usize,
    pub vocab_cap: usize,
}

impl Default for CoordinationParams {
    fn default() -> Self {
        Self {
            similarity_threshold: 0.8,
            max_posts_sampled: 200,
            vocab_cap: 1000,
        }
    }
}

impl CoordinationParams {
    pub fn validate(&self) -> Result<(), SocialError> {
        if !(self.similarity_threshold > 0.0 && self.similarity_threshold <= 1.0) {
            return Err(SocialError::InvalidParams(format!(
                "similarity_threshold {} outside (0, 1]",
                self.similarity_threshold
            )));
        }
        if self.max_posts_sampled < 2 || self.vocab_cap == 0 {
            return Err(SocialError::InvalidParams(
                "max_posts_sampled must be >= 2 and vocab_cap >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Posts in canonical `(timestamp, post_id)` order, keeping the most recent
/// `max` when there are more.
pub fn recent_sample<'a>(posts: &[&'a PostRecord], max: usize) -> Vec<&'a PostRecord> {
    let mut sorted = posts.to_vec();
    sorted.sort_by(|a, b| a.timestamp.cmp(&b.timestamp).then_with(|| a.post_id.cmp(&b.post_id)));
    let skip = sorted.len().saturating_sub(max);
    sorted.split_off(skip)
}

/// `2 / (N (N - 1)) · #{i < j : cos(v_i, v_j) > tau}` over raw texts.
pub fn coordination_of_texts(texts: &[&str], p: &CoordinationParams) -> f64 {
    let n = texts.len();
    if n < 2 {
        return 0.0;
    }
    let vectors = tfidf_vectors(texts, p.vocab_cap);
    let mut similar = 0usize;
    for i in 0..n {
        if vectors[i].entries.is_empty() {
            continue;
        }
        for j in (i + 1)..n {
            if vectors[i].dot(&vectors[j]) > p.similarity_threshold {
                similar += 1;
            }
        }
    }
    let pairs = n * (n - 1) / 2;
    similar as f64 / pairs as f64
}

/// Coordination for one ticker-day; days above the sample cap use the most
/// recent `max_posts_sampled` posts and report the sample's fraction.
pub fn coordination_score(posts: &[&PostRecord], p: &CoordinationParams) -> f64 {
    let sample = recent_sample(posts, p.max_posts_sampled);
    let texts: Vec<&str> = sample.iter().map(|p| p.text.as_str()).collect();
    coordination_of_texts(&texts, p)
}
