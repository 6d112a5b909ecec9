//! Independent brute-force oracles and random inputs shared by the
//! integration suites. Nothing here calls into the library's own helpers.

#![allow(dead_code)]

use std::collections::HashMap;

use amrs_core::ingest::PostRecord;
use amrs_core::scoring::FusedWindow;
use chrono::{Duration, NaiveDate, TimeZone, Utc};
use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------- TF-IDF

fn words(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() {
            cur.extend(ch.to_lowercase());
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn terms(text: &str) -> Vec<String> {
    let w = words(text);
    let mut t = w.clone();
    for i in 1..w.len() {
        t.push(format!("{} {}", w[i - 1], w[i]));
    }
    t
}

/// Dense smoothed TF-IDF rows (not normalized) over the `cap` terms with
/// the highest document frequency (ties broken lexicographically).
pub fn dense_tfidf(texts: &[&str], cap: usize) -> Vec<Vec<f64>> {
    let docs: Vec<Vec<String>> = texts.iter().map(|t| terms(t)).collect();
    let mut df: HashMap<&str, usize> = HashMap::new();
    for d in &docs {
        let mut uniq: Vec<&str> = d.iter().map(|s| s.as_str()).collect();
        uniq.sort();
        uniq.dedup();
        for u in uniq {
            *df.entry(u).or_default() += 1;
        }
    }
    let mut vocab: Vec<(&str, usize)> = df.into_iter().collect();
    vocab.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    vocab.truncate(cap);
    let n = docs.len() as f64;
    docs.iter()
        .map(|d| {
            vocab
                .iter()
                .map(|&(term, df)| {
                    let tf = d.iter().filter(|t| t.as_str() == term).count() as f64;
                    tf * (((1.0 + n) / (1.0 + df as f64)).ln() + 1.0)
                })
                .collect()
        })
        .collect()
}

pub fn dense_cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// O(N²) near-duplicate pair fraction.
pub fn coordination_oracle(texts: &[&str], tau: f64, cap: usize) -> f64 {
    let n = texts.len();
    if n < 2 {
        return 0.0;
    }
    let v = dense_tfidf(texts, cap);
    let mut hits = 0usize;
    for i in 0..n {
        for j in 0..n {
            if i < j && dense_cosine(&v[i], &v[j]) > tau {
                hits += 1;
            }
        }
    }
    hits as f64 / (n * (n - 1) / 2) as f64
}

// ------------------------------------------------------------------ AUCs

/// ROC points at every candidate threshold (each score, plus +inf),
/// sorted, then integrated with the trapezoid rule.
pub fn roc_auc_oracle(scores: &[f64], labels: &[bool]) -> f64 {
    let pos = labels.iter().filter(|&&l| l).count() as f64;
    let neg = labels.len() as f64 - pos;
    if pos == 0.0 || neg == 0.0 {
        return 0.5;
    }
    let mut cuts: Vec<f64> = scores.to_vec();
    cuts.push(f64::INFINITY);
    let mut pts: Vec<(f64, f64)> = cuts
        .iter()
        .map(|&t| {
            let tp = scores.iter().zip(labels).filter(|(s, l)| **l && **s >= t).count() as f64;
            let fp = scores.iter().zip(labels).filter(|(s, l)| !**l && **s >= t).count() as f64;
            (fp / neg, tp / pos)
        })
        .collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    pts.windows(2).map(|w| (w[1].0 - w[0].0) * (w[1].1 + w[0].1) / 2.0).sum()
}

/// Mann–Whitney U / (P·N), ties count one half.
pub fn mann_whitney(scores: &[f64], labels: &[bool]) -> f64 {
    let (mut u, mut p, mut n) = (0.0, 0usize, 0usize);
    for (i, &li) in labels.iter().enumerate() {
        if !li {
            n += 1;
            continue;
        }
        p += 1;
        for (j, &lj) in labels.iter().enumerate() {
            if !lj {
                u += match scores[i].partial_cmp(&scores[j]).unwrap() {
                    std::cmp::Ordering::Greater => 1.0,
                    std::cmp::Ordering::Equal => 0.5,
                    std::cmp::Ordering::Less => 0.0,
                };
            }
        }
    }
    if p == 0 || n == 0 {
        0.5
    } else {
        u / (p * n) as f64
    }
}

/// Step-wise average precision recomputed from scratch at each distinct
/// threshold, highest first.
pub fn average_precision_oracle(scores: &[f64], labels: &[bool]) -> f64 {
    let pos = labels.iter().filter(|&&l| l).count() as f64;
    if pos == 0.0 {
        return 0.0;
    }
    let mut cuts: Vec<f64> = scores.to_vec();
    cuts.sort_by(|a, b| b.partial_cmp(a).unwrap());
    cuts.dedup();
    let mut prev_recall = 0.0;
    let mut ap = 0.0;
    for t in cuts {
        let flagged: Vec<bool> = scores.iter().zip(labels).filter(|(s, _)| **s >= t).map(|(_, l)| *l).collect();
        let tp = flagged.iter().filter(|&&l| l).count() as f64;
        let recall = tp / pos;
        ap += (recall - prev_recall) * (tp / flagged.len() as f64);
        prev_recall = recall;
    }
    ap
}

// --------------------------------------------------------- random inputs

const WORDS: [&str; 14] = [
    "gme", "moon", "hold", "buy", "sell", "line", "apes", "short", "squeeze", "calls", "dip", "rocket", "now", "strong",
];

/// A random post text; `small` draws from a tiny vocabulary so
/// near-duplicates are common.
pub fn random_text(rng: &mut ChaCha8Rng, small: bool) -> String {
    let pool = if small { &WORDS[..5] } else { &WORDS[..] };
    let len = rng.random_range(0..=7);
    (0..len).map(|_| *pool.choose(rng).unwrap()).collect::<Vec<_>>().join(" ")
}

pub fn random_corpus(rng: &mut ChaCha8Rng, max_docs: usize) -> Vec<String> {
    let n = rng.random_range(0..=max_docs);
    let small = rng.random_bool(0.5);
    let mut docs: Vec<String> = Vec::with_capacity(n);
    for _ in 0..n {
        if !docs.is_empty() && rng.random_bool(0.3) {
            let copy = docs.choose(rng).unwrap().clone();
            docs.push(copy);
        } else {
            docs.push(random_text(rng, small));
        }
    }
    docs
}

/// Scores on a coarse grid (so ties occur) with random labels.
pub fn random_ranking(rng: &mut ChaCha8Rng, max_len: usize) -> (Vec<f64>, Vec<bool>) {
    let n = rng.random_range(1..=max_len);
    let coarse = rng.random_bool(0.5);
    let scores = (0..n)
        .map(|_| {
            if coarse {
                rng.random_range(0..10) as f64 / 10.0
            } else {
                rng.random::<f64>()
            }
        })
        .collect();
    let labels = (0..n).map(|_| rng.random_bool(0.3)).collect();
    (scores, labels)
}

pub fn day(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}

/// One random fused row; `spiky` rows have heavy tails on every channel.
pub fn random_window(rng: &mut ChaCha8Rng, ticker: &str, date: NaiveDate) -> FusedWindow {
    let spiky = rng.random_bool(0.1);
    let scale: f64 = if spiky { 10.0 } else { 1.0 };
    let close = rng.random_range(5.0..50.0);
    let volume_zscore = rng.random_range(-2.0..2.0) * scale;
    FusedWindow {
        ticker: ticker.to_string(),
        date,
        social_volume: (rng.random_range(0.0..40.0) * scale) as u64,
        avg_sentiment: rng.random_range(-1.0..1.0),
        unique_authors: rng.random_range(0..20),
        avg_bot_score: rng.random_range(0.0..1.0),
        bot_heavy_post_ratio: rng.random_range(0.0..1.0),
        open: close,
        high: close * 1.02,
        low: close * 0.98,
        close,
        adj_close: close,
        volume: rng.random_range(1e5..1e7),
        daily_return: rng.random_range(-0.1..0.1) * scale.sqrt(),
        volume_mean: 1e6,
        volume_std: 1e5,
        volume_zscore,
        is_volume_anomaly: volume_zscore >= 2.0,
        coordination_score: if rng.random_bool(0.2) { 0.0 } else { rng.random_range(0.0..1.0) },
    }
}

/// `n` consecutive calendar days of random rows starting 2021-01-01.
pub fn random_series(rng: &mut ChaCha8Rng, ticker: &str, n: usize) -> Vec<FusedWindow> {
    (0..n)
        .map(|i| random_window(rng, ticker, day(2021, 1, 1) + Duration::days(i as i64)))
        .collect()
}

pub fn post(i: usize, author: &str, text: &str) -> PostRecord {
    PostRecord {
        post_id: format!("p{i:05}"),
        ticker: "GME".into(),
        timestamp: Utc.with_ymd_and_hms(2021, 1, 4, 14, 0, 0).unwrap() + Duration::seconds(i as i64),
        author_id: author.to_string(),
        subreddit: "wallstreetbets".into(),
        text: text.to_string(),
        lexicon_sentiment: None,
        aux_sentiment: None,
    }
}
