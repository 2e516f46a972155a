//! Core library for mining topics from source code repositories.
//!
//! The pipeline turns a directory tree of repositories into bags of
//! identifier-derived words, removes fuzzy-duplicate repositories with
//! weighted MinHash + LSH, trains an additively regularized topic model
//! with EM, and projects repositories into the topic space.

pub mod artm;
pub mod corpus;
pub mod embedreport;
pub mod lexing;
pub mod lshdedup;
mod mix;
pub mod naming;
pub mod wminhash;

use std::path::PathBuf;

pub use artm::{TopicModel, TrainConfig, TrainMetrics};
pub use corpus::{SparseCorpus, Vocabulary};
pub use embedreport::RepoEmbedding;
pub use lexing::{LanguageProfile, SourceFile};
pub use lshdedup::{BandPlan, DuplicateSet, LshIndex};
pub use naming::Bag;
pub use wminhash::{WmhGenerator, WmhSignature};

/// Errors shared across the pipeline stages.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error in {path} at line {line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    #[error("empty document")]
    EmptyDocument,
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("duplicate repository name: {0}")]
    DuplicateRepo(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
