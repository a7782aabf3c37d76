//! Individualized document similarity from instance-based learning twins.
//!
//! An IBL cognitive model replays a participant's categorization history over
//! document embeddings and its normalized blended values become a per-person
//! similarity metric. The crate also carries the baseline metrics it is
//! compared against (semantic, cosine, weighted cosine, pruned cosine,
//! ensemble), the fitting procedures behind the learned baselines, and the
//! evaluation harness: KDE log-probability scoring, repeated-split logistic
//! regression and twin next-decision accuracy. A synthetic cohort generator
//! produces datasets in the same on-disk formats for desk-scale testing.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod data;
pub mod error;
pub mod eval;
pub mod ibl;
pub mod learn;
pub mod rng;
pub mod similarity;
pub mod synth;
pub mod vector;

pub use data::{
    Author, Category, Dataset, DatasetPaths, EmailDoc, Embedding, Grouping, JudgementRecord, NormalizedJudgement,
    Phase, SemanticFeatures, Style,
};
pub use error::{Error, Result};
pub use eval::{EvalRow, Report};
pub use ibl::{IblParameters, Instance, Memory, Twin, TwinTrace};
pub use similarity::{MetricKind, SimilarityPoint};
pub use synth::{CohortConfig, GroundTruth};
