//! Library metrics and coordination against brute-force oracles.

mod support;

use amrs_core::eval::{pr_auc, roc_auc};
use amrs_core::social::{coordination_of_texts, coordination_score, tfidf_vectors, CoordinationParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::*;

const AUC_TOL: f64 = 1e-9;

#[test]
fn roc_auc_matches_threshold_enumeration_and_mann_whitney() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..1000 {
        let (s, l) = random_ranking(&mut rng, 50);
        let got = roc_auc(&s, &l);
        let brute = roc_auc_oracle(&s, &l);
        let mw = mann_whitney(&s, &l);
        assert!((got - brute).abs() < AUC_TOL, "case {case}: {got} vs enumeration {brute}");
        assert!((got - mw).abs() < AUC_TOL, "case {case}: {got} vs Mann-Whitney {mw}");
    }
}

#[test]
fn pr_auc_matches_step_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..1000 {
        let (s, l) = random_ranking(&mut rng, 50);
        let got = pr_auc(&s, &l);
        let want = average_precision_oracle(&s, &l);
        assert!((got - want).abs() < AUC_TOL, "case {case}: {got} vs {want}");
        assert!((0.0..=1.0).contains(&got));
    }
}

#[test]
fn coordination_matches_pairwise_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in 0..200 {
        let docs = random_corpus(&mut rng, 60);
        let texts: Vec<&str> = docs.iter().map(String::as_str).collect();
        let p = CoordinationParams {
            similarity_threshold: [0.5, 0.8, 0.95][rng.random_range(0..3)],
            max_posts_sampled: 200,
            vocab_cap: if rng.random_bool(0.3) { rng.random_range(1..8) } else { 1000 },
        };
        let got = coordination_of_texts(&texts, &p);
        let want = coordination_oracle(&texts, p.similarity_threshold, p.vocab_cap);
        assert_eq!(got, want, "case {case}: corpus {texts:?} params {p:?}");
    }
}

#[test]
fn tfidf_cosines_match_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..50 {
        let docs = random_corpus(&mut rng, 20);
        let texts: Vec<&str> = docs.iter().map(String::as_str).collect();
        let sparse = tfidf_vectors(&texts, 1000);
        let dense = dense_tfidf(&texts, 1000);
        for i in 0..texts.len() {
            for j in 0..texts.len() {
                let got = amrs_core::social::cosine(&sparse[i], &sparse[j]);
                let want = dense_cosine(&dense[i], &dense[j]);
                assert!((got - want).abs() < 1e-12, "{:?} / {:?}", texts[i], texts[j]);
            }
        }
    }
}

#[test]
fn sampled_day_uses_the_most_recent_posts() {
    // 250 posts: the oldest 50 are identical, the rest unique, so only a
    // sample that wrongly keeps the oldest posts would see duplicates.
    let texts: Vec<String> = (0..250)
        .map(|i| if i < 50 { "buy gme now".to_string() } else { format!("unique post {i} w{i}x") })
        .collect();
    let posts: Vec<_> = texts.iter().enumerate().map(|(i, t)| post(i, "a", t)).collect();
    let refs: Vec<_> = posts.iter().collect();
    let p = CoordinationParams::default();
    let recent: Vec<&str> = texts[50..].iter().map(String::as_str).collect();
    assert_eq!(coordination_score(&refs, &p), coordination_oracle(&recent, 0.8, 1000));
    assert_eq!(coordination_score(&refs, &p), 0.0);
}
