use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("span of rank {rank} is too large to enumerate (limit {limit})")]
    RankTooLarge { rank: usize, limit: usize },

    #[error("invalid bit string: {0}")]
    Parse(String),

    #[error("code construction failed: {0}")]
    Validation(String),

    #[error("invalid noise parameters: {0}")]
    Noise(String),

    #[error("unknown code id `{0}` (valid ids: golay:h1, golay:h2, golay:h3, toric:<d>)")]
    UnknownCode(String),

    #[error("unknown decoder id `{0}` (valid ids: table, match, external:<cmd-or-addr>)")]
    UnknownDecoder(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("decoder error: {0}")]
    Decode(String),

    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("search budget exceeded: {needed} evaluations needed, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("sweep aborted after {completed} completed points: {cause}")]
    SweepAborted { completed: usize, cause: Box<Error> },

    #[error("{}:{line}: {reason}", path.display())]
    Dataset { path: PathBuf, line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
