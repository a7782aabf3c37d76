use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::point::{MetricKind, SimilarityPoint};
use super::SimilarityError;

/// Baselines the ensemble combines.
pub const ENSEMBLE_COMPONENTS: [MetricKind; 4] = [
    MetricKind::Semantic,
    MetricKind::Cosine,
    MetricKind::WeightedCosine,
    MetricKind::PrunedCosine,
];

/// Convex weights over component metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EnsembleWeights(pub IndexMap<MetricKind, f64>);

impl EnsembleWeights {
    pub fn new(weights: impl IntoIterator<Item = (MetricKind, f64)>) -> Result<Self, SimilarityError> {
        let w = Self(weights.into_iter().collect());
        w.check_simplex()?;
        Ok(w)
    }

    pub fn check_simplex(&self) -> Result<(), SimilarityError> {
        if self.0.is_empty() {
            return Err(SimilarityError::WeightNotOnSimplex("no components".into()));
        }
        if self.0.values().any(|&w| !(w >= 0.0)) {
            return Err(SimilarityError::WeightNotOnSimplex("negative weight".into()));
        }
        let s: f64 = self.0.values().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(SimilarityError::WeightNotOnSimplex(format!("weights sum to {s}")));
        }
        Ok(())
    }

    pub fn get(&self, m: MetricKind) -> f64 {
        self.0.get(&m).copied().unwrap_or(0.0)
    }
}

/// Convex combination of component points for one email. Components are
/// taken on the unit scale so everything shares the human target's range.
pub fn ensemble_point(
    email_id: &str,
    components: &[&SimilarityPoint],
    weights: &EnsembleWeights,
) -> Result<SimilarityPoint, SimilarityError> {
    weights.check_simplex()?;
    let mut sim = [0.0; 2];
    for (&metric, &w) in &weights.0 {
        let p =
            components
                .iter()
                .find(|p| p.source_metric == metric)
                .ok_or_else(|| SimilarityError::MissingComponent {
                    metric,
                    email_id: email_id.to_string(),
                })?;
        let [a, b] = p.on_unit_scale();
        sim[0] += w * a;
        sim[1] += w * b;
    }
    Ok(SimilarityPoint::new(email_id, sim, MetricKind::Ensemble))
}
