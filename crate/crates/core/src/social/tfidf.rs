//! Sparse TF-IDF over unigrams and bigrams.
//!
//! Tokens are lowercased runs of alphanumerics. The vocabulary keeps the
//! `vocab_cap` terms with the highest document frequency (ties broken
//! lexicographically). Weights are `count · idf` with the smoothed
//! `idf = ln((1 + N) / (1 + df)) + 1`, so a term shared by every document
//! still carries weight and identical documents stay identical rather than
//! collapsing to zero. Each vector is L2-normalized; empty documents give
//! the zero vector.

use std::collections::{BTreeMap, HashMap};

/// Sparse vector with strictly increasing term indices.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseVector {
    pub entries: Vec<(u32, f64)>,
}

impl SparseVector {
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&(_, w)| w == 0.0)
    }

    pub fn dot(&self, other: &SparseVector) -> f64 {
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j, mut acc) = (0, 0, 0.0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += a[i].1 * b[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|&(_, w)| w * w).sum::<f64>().sqrt()
    }
}

/// Cosine similarity; 0 if either vector is zero.
pub fn cosine(a: &SparseVector, b: &SparseVector) -> f64 {
    let (na, nb) = (a.norm(), b.norm());
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        a.dot(b) / (na * nb)
    }
}

pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Unigrams followed by space-joined bigrams.
pub fn ngram_terms(text: &str) -> Vec<String> {
    let tokens = tokenize(text);
    let mut terms = tokens.clone();
    terms.extend(tokens.windows(2).map(|w| format!("{} {}", w[0], w[1])));
    terms
}

pub fn idf(n_docs: usize, df: usize) -> f64 {
    ((1.0 + n_docs as f64) / (1.0 + df as f64)).ln() + 1.0
}

/// Fitted vocabulary: selected terms in lexicographic order with their idf.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    pub terms: Vec<String>,
    pub idf: Vec<f64>,
    index: HashMap<String, u32>,
}

impl Vocabulary {
    pub fn fit(docs: &[Vec<String>], vocab_cap: usize) -> Self {
        let mut df: BTreeMap<&str, usize> = BTreeMap::new();
        for doc in docs {
            let mut seen: Vec<&str> = doc.iter().map(String::as_str).collect();
            seen.sort_unstable();
            seen.dedup();
            for t in seen {
                *df.entry(t).or_insert(0) += 1;
            }
        }
        let mut ranked: Vec<(&str, usize)> = df.into_iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        ranked.truncate(vocab_cap);
        ranked.sort_by(|a, b| a.0.cmp(b.0));
        let n = docs.len();
        let terms: Vec<String> = ranked.iter().map(|(t, _)| t.to_string()).collect();
        let idf = ranked.iter().map(|&(_, d)| idf(n, d)).collect();
        let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();
        Self { terms, idf, index }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn transform(&self, doc: &[String]) -> SparseVector {
        let mut counts: BTreeMap<u32, f64> = BTreeMap::new();
        for t in doc {
            if let Some(&i) = self.index.get(t) {
                *counts.entry(i).or_insert(0.0) += 1.0;
            }
        }
        let mut v = SparseVector {
            entries: counts
                .into_iter()
                .map(|(i, c)| (i, c * self.idf[i as usize]))
                .collect(),
        };
        let norm = v.norm();
        if norm > 0.0 {
            for e in &mut v.entries {
                e.1 /= norm;
            }
        }
        v
    }
}

/// Unit TF-IDF vectors for `texts`, fitted on `texts` themselves.
pub fn tfidf_vectors(texts: &[&str], vocab_cap: usize) -> Vec<SparseVector> {
    let docs: Vec<Vec<String>> = texts.iter().map(|t| ngram_terms(t)).collect();
    let vocab = Vocabulary::fit(&docs, vocab_cap);
    docs.iter().map(|d| vocab.transform(d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_texts_cosine_one() {
        let v = tfidf_vectors(&["hold the line", "hold the line"], 1000);
        assert_eq!(v[0], v[1]);
        assert!((cosine(&v[0], &v[1]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disjoint_texts_orthogonal() {
        let v = tfidf_vectors(&["buy now", "sell later"], 1000);
        assert_eq!(cosine(&v[0], &v[1]), 0.0);
    }

    #[test]
    fn three_doc_example() {
        let v = tfidf_vectors(&["buy gme now", "buy gme now", "sell apple"], 1000);
        assert!((cosine(&v[0], &v[1]) - 1.0).abs() < 1e-12);
        assert_eq!(cosine(&v[0], &v[2]), 0.0);
        // Hand-computed weights: every term of doc 0 has df 2 of 3.
        let w = idf(3, 2);
        assert_eq!(w, (4.0f64 / 3.0).ln() + 1.0);
        assert_eq!(v[0].entries.len(), 5);
        for &(_, x) in &v[0].entries {
            assert!((x - 1.0 / 5f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn terms_and_tokens() {
        assert_eq!(tokenize("GME 🚀 to-the MOON!!"), vec!["gme", "to", "the", "moon"]);
        assert_eq!(ngram_terms("a b c"), vec!["a", "b", "c", "a b", "b c"]);
    }

    #[test]
    fn vocab_cap_prefers_frequent_then_lexicographic() {
        let docs = vec![
            ngram_terms("zeta alpha"),
            ngram_terms("zeta beta"),
            ngram_terms("zeta gamma"),
        ];
        let vocab = Vocabulary::fit(&docs, 2);
        assert_eq!(vocab.terms, vec!["alpha".to_string(), "zeta".to_string()]);
    }

    #[test]
    fn empty_doc_is_zero_vector() {
        let v = tfidf_vectors(&["", "words here"], 1000);
        assert!(v[0].is_zero());
        assert_eq!(cosine(&v[0], &v[1]), 0.0);
    }
}
