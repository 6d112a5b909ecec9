//! Lexicon sentiment and the lexicon/auxiliary fusion.
//!
//! Text is lowercased and split into runs of alphanumerics (apostrophes are
//! kept inside words). Each token found in the valence lexicon contributes
//! its valence, multiplied by [`BOOSTER_FACTOR`] when the previous token is an
//! intensifier and sign-flipped when the previous token is a negator. The
//! mean over sentiment-bearing tokens is squashed by `x / (1 + |x|)`.

use std::collections::HashMap;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::SocialError;

const BUNDLED_LEXICON: &str = include_str!("../../data/lexicon.tsv");

pub const BOOSTER_FACTOR: f64 = 1.25;

const NEGATORS: &[&str] = &[
    "not", "no", "never", "isn't", "aren't", "wasn't", "weren't", "don't", "doesn't", "didn't",
    "won't", "can't", "cannot", "couldn't", "shouldn't", "wouldn't", "ain't", "nor", "without",
    "hardly", "dont", "cant", "wont", "isnt",
];

const BOOSTERS: &[&str] = &[
    "very", "really", "extremely", "super", "so", "incredibly", "totally", "absolutely",
    "hugely", "massively", "insanely", "completely", "highly", "mega", "fucking",
];

/// Valence dictionary on a `[-4, 4]` scale.
#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    valence: HashMap<String, f64>,
}

impl Lexicon {
    /// Parses `term<TAB>valence` lines; blank lines and `#` comments are skipped.
    pub fn from_tsv(text: &str) -> Result<Self, SocialError> {
        let mut valence = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |reason: String| SocialError::Lexicon { line: i + 1, reason };
            let (term, value) = line
                .split_once('\t')
                .ok_or_else(|| bad("expected term<TAB>valence".into()))?;
            let v: f64 = value
                .trim()
                .parse()
                .map_err(|_| bad(format!("valence {value:?} is not a number")))?;
            if !v.is_finite() {
                return Err(bad(format!("valence {v} is not finite")));
            }
            let term = term.trim().to_lowercase();
            if term.is_empty() {
                return Err(bad("empty term".into()));
            }
            valence.insert(term, v);
        }
        Ok(Self { valence })
    }

    pub fn load(path: &Path) -> Result<Self, SocialError> {
        let text = std::fs::read_to_string(path).map_err(|source| SocialError::LexiconIo {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_tsv(&text)
    }

    /// The lexicon shipped with the crate.
    pub fn bundled() -> &'static Lexicon {
        static LEXICON: OnceLock<Lexicon> = OnceLock::new();
        LEXICON.get_or_init(|| Lexicon::from_tsv(BUNDLED_LEXICON).expect("bundled lexicon parses"))
    }

    pub fn len(&self) -> usize {
        self.valence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.valence.is_empty()
    }

    pub fn valence(&self, term: &str) -> Option<f64> {
        self.valence.get(term).copied()
    }

    /// Sentiment of `text` in `[-1, 1]`; 0 for text without lexicon terms.
    pub fn score(&self, text: &str) -> f64 {
        let tokens = tokenize(text);
        let mut sum = 0.0;
        let mut n = 0usize;
        for (i, tok) in tokens.iter().enumerate() {
            let Some(mut v) = self.valence(tok) else {
                continue;
            };
            if i > 0 {
                let prev = tokens[i - 1].as_str();
                if BOOSTERS.contains(&prev) {
                    v *= BOOSTER_FACTOR;
                } else if NEGATORS.contains(&prev) {
                    v = -v;
                }
            }
            sum += v;
            n += 1;
        }
        if n == 0 {
            return 0.0;
        }
        let mean = sum / n as f64;
        mean / (1.0 + mean.abs())
    }
}

/// Lowercased word tokens; apostrophes survive only between word characters.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for raw in text.split(|c: char| !(c.is_alphanumeric() || c == '\'' || c == '’')) {
        let w = raw.trim_matches(|c| c == '\'' || c == '’');
        if !w.is_empty() {
            out.push(w.to_lowercase().replace('’', "'"));
        }
    }
    out
}

/// Scores `text` with the bundled lexicon.
pub fn lexicon_sentiment(text: &str) -> f64 {
    Lexicon::bundled().score(text)
}

/// A second per-post scorer (e.g. a finance-tuned transformer) plugged in
/// beside the lexicon. Implementations must return values in `[-1, 1]`.
pub trait AuxSentimentScorer {
    fn score(&self, text: &str) -> Option<f64>;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SentimentWeights {
    pub w_lexicon: f64,
    pub w_aux: f64,
}

impl Default for SentimentWeights {
    fn default() -> Self {
        Self {
            w_lexicon: 0.4,
            w_aux: 0.6,
        }
    }
}

impl SentimentWeights {
    pub fn validate(&self) -> Result<(), SocialError> {
        let ok = self.w_lexicon >= 0.0
            && self.w_aux >= 0.0
            && ((self.w_lexicon + self.w_aux) - 1.0).abs() <= 1e-9;
        if ok {
            Ok(())
        } else {
            Err(SocialError::InvalidParams(format!(
                "sentiment weights must be non-negative and sum to 1, got {} + {}",
                self.w_lexicon, self.w_aux
            )))
        }
    }
}

fn check_unit(name: &'static str, value: f64) -> Result<f64, SocialError> {
    if (-1.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(SocialError::OutOfRangeInput { name, value })
    }
}

/// Weighted lexicon/aux blend; the lexicon alone when no aux score exists.
pub fn combined_sentiment(lexicon: f64, aux: Option<f64>, w: &SentimentWeights) -> Result<f64, SocialError> {
    let lexicon = check_unit("lexicon", lexicon)?;
    match aux {
        Some(a) => {
            let a = check_unit("aux", a)?;
            Ok((w.w_lexicon * lexicon + w.w_aux * a).clamp(-1.0, 1.0))
        }
        None => Ok(lexicon),
    }
}
