use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::logistic::{logistic_fit, LogisticConfig};
use super::EvalError;
use crate::data::Category;
use crate::rng::{derive_seed_index, seeded};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitPlan {
    pub n_splits: usize,
    pub train_fraction: f64,
    pub rng_seed: u64,
}

impl Default for SplitPlan {
    fn default() -> Self {
        Self {
            n_splits: 100,
            train_fraction: 0.5,
            rng_seed: 0,
        }
    }
}

impl SplitPlan {
    pub fn validate(&self) -> Result<(), EvalError> {
        if self.n_splits == 0 {
            return Err(EvalError::InvalidPlan("n_splits must be >= 1".into()));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(EvalError::InvalidPlan("train_fraction must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// Mean and population standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanSd {
    pub mean: f64,
    pub sd: f64,
    pub n: usize,
}

impl MeanSd {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        Some(Self {
            mean,
            sd: var.sqrt(),
            n: values.len(),
        })
    }
}

/// Train and test indices for one split. Each category contributes
/// `round(fraction * n_c)` training items, kept in `[1, n_c - 1]`.
pub fn stratified_split(labels: &[Category], fraction: f64, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut rng = seeded(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for c in Category::ALL {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == c).collect();
        if idx.is_empty() {
            continue;
        }
        idx.shuffle(&mut rng);
        let k = ((fraction * idx.len() as f64).round() as usize).clamp(1, idx.len().saturating_sub(1).max(1));
        train.extend_from_slice(&idx[..k]);
        test.extend_from_slice(&idx[k..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    (train, test)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracySummary {
    pub mean: f64,
    pub sd: f64,
    pub per_split: Vec<f64>,
}

/// Held-out logistic accuracy over the plan's splits.
pub fn regression_accuracy(
    features: &[[f64; 2]],
    labels: &[Category],
    plan: &SplitPlan,
) -> Result<AccuracySummary, EvalError> {
    plan.validate()?;
    assert_eq!(features.len(), labels.len(), "features and labels must align");
    for c in Category::ALL {
        let n = labels.iter().filter(|l| **l == c).count();
        if n < 2 {
            return Err(EvalError::TooFewPerCategory { category: c, found: n });
        }
    }
    let config = LogisticConfig::default();
    let per_split = (0..plan.n_splits)
        .into_par_iter()
        .map(|s| {
            let (train, test) =
                stratified_split(labels, plan.train_fraction, derive_seed_index(plan.rng_seed, s as u64));
            let xs: Vec<[f64; 2]> = train.iter().map(|&i| features[i]).collect();
            let ys: Vec<Category> = train.iter().map(|&i| labels[i]).collect();
            let model = logistic_fit(&xs, &ys, &config)?;
            let tx: Vec<[f64; 2]> = test.iter().map(|&i| features[i]).collect();
            let ty: Vec<Category> = test.iter().map(|&i| labels[i]).collect();
            Ok(model.accuracy(&tx, &ty))
        })
        .collect::<Result<Vec<f64>, EvalError>>()?;
    let s = MeanSd::of(&per_split).expect("n_splits >= 1");
    Ok(AccuracySummary {
        mean: s.mean,
        sd: s.sd,
        per_split,
    })
}
