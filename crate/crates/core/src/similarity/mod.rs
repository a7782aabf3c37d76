//! Per-email similarity scorers. Every scorer emits [`SimilarityPoint`]s:
//! one (similarity-to-phishing, similarity-to-ham) pair per email.

mod embedding;
mod ensemble;
mod human;
mod ibis;
mod point;
mod semantic;

use thiserror::Error;

use crate::data::Category;
use crate::ibl::IblError;

pub use embedding::{
    cosine, cosine_point, pruned_cosine, pruned_point, weighted_cosine, weighted_point, CategoryPrototype, Prototypes,
    PruneMask, WeightVector,
};
pub use ensemble::{ensemble_point, EnsembleWeights, ENSEMBLE_COMPONENTS};
pub use human::{
    human_points, human_subjective_point, pairwise_from_values, pairwise_human_similarity, subjective_scores,
    HumanNormalization,
};
pub use ibis::{ibis_point, ibis_points, ibis_trial_points, pairwise_ibis};
pub use point::{write_points_csv, MetricKind, SimilarityPoint};
pub use semantic::semantic_point;

#[derive(Debug, Error, PartialEq)]
pub enum SimilarityError {
    #[error("cosine undefined for a zero vector")]
    ZeroVector,
    #[error("vector is zero after weighting")]
    ZeroAfterWeighting,
    #[error("vector is zero after masking")]
    ZeroAfterMasking,
    #[error("vector dimensions differ ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("no judgements for email `{0}`")]
    NoJudgements(String),
    #[error("pairwise similarity denominator is zero")]
    DegenerateDenominator,
    #[error("ensemble weights are not on the simplex: {0}")]
    WeightNotOnSimplex(String),
    #[error("all blended values are zero")]
    DegenerateBlend,
    #[error("no emails of category {0} to build a prototype from")]
    EmptyCategory(Category),
    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),
    #[error("invalid prune mask: {0}")]
    InvalidMask(String),
    #[error("missing {metric} point for email `{email_id}`")]
    MissingComponent { metric: MetricKind, email_id: String },
    #[error("unknown email `{0}`")]
    UnknownEmail(String),
    #[error(transparent)]
    Ibl(#[from] IblError),
}
