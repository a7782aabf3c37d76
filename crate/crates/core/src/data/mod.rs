//! Domain types, on-disk formats and validation for emails, embeddings and
//! judgement logs.

mod io;
mod normalize;
mod types;

use std::path::PathBuf;

use thiserror::Error;

pub use io::{
    load_dataset, read_emails, read_embeddings, read_judgements, write_dataset, write_emails, write_embeddings_binary,
    write_judgements, DatasetPaths, EMBEDDING_MAGIC,
};
pub use normalize::{normalize_judgements, Grouping, NormalizeWarning, Normalized, NormalizedJudgement};
pub use types::{Author, Category, Dataset, EmailDoc, Embedding, JudgementRecord, Phase, SemanticFeatures, Style};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed record: {message}")]
    MalformedRecord {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("email `{0}` has no embedding")]
    MissingEmbedding(String),
    #[error("embedding for unknown email `{0}`")]
    OrphanEmbedding(String),
    #[error("judgement on line {line} references unknown email `{email_id}`")]
    DanglingJudgement { line: usize, email_id: String },
    #[error("embedding `{id}` has dimension {found}, expected {expected}")]
    DimensionMismatch { id: String, expected: usize, found: usize },
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("non-finite value in embedding `{0}`")]
    NonFinite(String),
    #[error("participant `{participant}`: trial_index {trial_index} does not increase")]
    UnsortedTrials { participant: String, trial_index: u32 },
    #[error("empty normalization group")]
    EmptyGroup,
    #[error("dataset has no emails")]
    Empty,
}
