use std::path::PathBuf;

use crate::model::{SfcId, Violation};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid instance: {}", join_violations(.0))]
    InvalidInstance(Vec<Violation>),

    #[error("invalid ground truth: {0}")]
    InvalidGroundTruth(String),

    #[error("invalid reward weights: omega={omega}, mu={mu} (both must be > 0)")]
    InvalidWeights { omega: f64, mu: f64 },

    #[error("unknown SFC {0}")]
    UnknownSfc(SfcId),

    #[error("search space too large: {states} states exceeds budget {budget}")]
    SearchSpaceTooLarge { states: u128, budget: u64 },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("conflicting overrides: {0}")]
    ConflictingOverride(String),

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", .path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{}: {source}", .path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
