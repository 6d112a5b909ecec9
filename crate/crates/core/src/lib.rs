//! Manipulation-risk engine for equities.
//!
//! Social-media activity (volume, sentiment, bot-likeness, near-duplicate
//! coordination) is fused with daily OHLCV features into one row per
//! ticker-day, scored with the AMRS weighted fusion under causal
//! expanding-window normalization, and evaluated with leakage-free
//! forward-walk metrics, a prospective prediction log, lead-time analysis,
//! baselines, ablations and weight-sensitivity studies.
//!
//! Pipeline order:
//!
//! 1. [`ingest`]: OHLCV / ground-truth CSV loaders, the seeded synthetic
//!    post generator and the columnar stage store.
//! 2. [`social`] and [`market`]: per-post and per-day features.
//! 3. [`scoring`]: fusion onto the trading-day axis and the AMRS pass.
//! 4. [`eval`]: everything that measures the scores.
//!
//! [`stages`] wires steps 1-3 together for one ticker.

pub mod calendar;
pub mod error;
pub mod eval;
pub mod ingest;
pub mod market;
pub mod scoring;
pub mod social;
pub mod stages;
pub mod stats;

pub use error::{Error, Result};
