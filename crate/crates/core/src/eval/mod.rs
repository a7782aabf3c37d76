//! Scoring similarity metrics against human judgements: KDE log scores,
//! repeated-split logistic accuracy, and twin prediction accuracy.

mod harness;
mod kde;
mod logistic;
mod report;
mod splits;

use std::path::PathBuf;

use thiserror::Error;

use crate::data::{Category, DataError};
use crate::ibl::{IblError, TwinTrace};
use crate::learn::FitError;
use crate::similarity::{MetricKind, SimilarityError};

pub use harness::{
    fit_artifacts, train_split, AverageScore, EnsembleArtifact, EvalContext, EvalOptions, EvalRow, Figures,
    FittedArtifacts, IndividualFigure, IndividualScore, KdeDirection, MaskArtifact, ParticipantReport, Report,
    TrainSplit, WeightArtifact,
};
pub use kde::{kde_fit, kde_log_score, Bandwidth, KdeModel, KdeScore, BANDWIDTH_FLOOR, LOG_DENSITY_FLOOR};
pub use logistic::{logistic_fit, LogisticConfig, LogisticModel};
pub use report::{figure_number, write_report, REPORT_CSV_HEADER};
pub use splits::{regression_accuracy, stratified_split, AccuracySummary, MeanSd, SplitPlan};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("no points to fit a density to")]
    EmptyPoints,
    #[error("no points to evaluate")]
    EmptyEval,
    #[error("score is not finite")]
    NonFiniteScore,
    #[error("bandwidth must be positive")]
    InvalidBandwidth,
    #[error("training data contains a single class")]
    SingleClass,
    #[error("need at least 2 items of category {category}, found {found}")]
    TooFewPerCategory { category: Category, found: usize },
    #[error("participant `{participant}` has {found} judgements, at least {required} required")]
    TooFewJudgements {
        participant: String,
        found: usize,
        required: usize,
    },
    #[error("invalid split plan: {0}")]
    InvalidPlan(String),
    #[error("twin trace is empty")]
    EmptyTrace,
    #[error("metric {metric} needs a fitted {artifact}; run `ibis fit --metric {metric}` first")]
    MissingArtifact { metric: MetricKind, artifact: &'static str },
    #[error("unknown participant `{0}`")]
    UnknownParticipant(String),
    #[error("no human judgements in the dataset")]
    NoHumanPoints,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Ibl(#[from] IblError),
    #[error(transparent)]
    Similarity(#[from] SimilarityError),
    #[error(transparent)]
    Fit(#[from] FitError),
}

impl EvalError {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numeric(&self) -> bool {
        match self {
            EvalError::NonFiniteScore => true,
            EvalError::Ibl(e) => e.is_numeric(),
            EvalError::Similarity(_) => true,
            EvalError::Fit(e) => !matches!(e, FitError::InsufficientData(_) | FitError::InvalidConfig(_)),
            _ => false,
        }
    }
}

/// Fraction of trials on which the twin predicted the participant's choice.
pub fn prediction_accuracy(trace: &TwinTrace) -> Result<f64, EvalError> {
    if trace.is_empty() {
        return Err(EvalError::EmptyTrace);
    }
    let hits = trace.records.iter().filter(|r| r.predicted == r.actual).count();
    Ok(hits as f64 / trace.len() as f64)
}
