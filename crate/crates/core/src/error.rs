use thiserror::Error;

use crate::eval::EvalError;
use crate::ingest::store::StoreError;
use crate::ingest::IngestError;
use crate::market::MarketError;
use crate::scoring::ScoringError;
use crate::social::SocialError;

/// Crate-wide error, one variant per subsystem.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Social(#[from] SocialError),
    #[error(transparent)]
    Market(#[from] MarketError),
    #[error(transparent)]
    Scoring(#[from] ScoringError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
