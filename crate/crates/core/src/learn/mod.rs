//! Fitting for the learned baselines: the diagonal weighted-cosine transform,
//! the pruning mask, and ensemble weights. Every fit minimizes squared
//! discrepancy to human subjective similarity and is deterministic.

mod config;
mod ensemble;
mod prune;
mod weights;

use thiserror::Error;

use crate::similarity::SimilarityError;

pub use config::{FitConfig, FitReport};
pub use ensemble::{ensemble_loss, fit_ensemble, project_simplex};
pub use prune::{build_prune_mask, default_prune_k, rank_dimensions, DimensionRanking};
pub use weights::{analytic_weight_gradient, fit_weighted_cosine, weighted_cosine_loss, WeightBatch};

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid fit configuration: {0}")]
    InvalidConfig(String),
    #[error("loss is not finite")]
    NonFiniteLoss,
    #[error("gradient is not finite")]
    NonFiniteGradient,
    #[error("k = {k} exceeds the embedding dimension {dimension}")]
    KTooLarge { k: usize, dimension: usize },
    #[error("points are not aligned: {0}")]
    MisalignedPoints(String),
    #[error(transparent)]
    Similarity(#[from] SimilarityError),
}
