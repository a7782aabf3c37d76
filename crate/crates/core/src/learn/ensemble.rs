use std::collections::HashMap;

use super::config::{descend, FitConfig, FitReport};
use super::FitError;
use crate::similarity::{EnsembleWeights, MetricKind, SimilarityPoint};

/// Euclidean projection onto the probability simplex (sort-based).
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        cumulative += ui;
        let t = (cumulative - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

/// Feature tensor `[email][component] -> [phishing, ham]` on the unit scale,
/// plus the aligned human targets.
struct Design {
    features: Vec<Vec<[f64; 2]>>,
    targets: Vec<[f64; 2]>,
}

impl Design {
    fn new(components: &[(MetricKind, &[SimilarityPoint])], human: &[SimilarityPoint]) -> Result<Self, FitError> {
        if components.len() < 2 {
            return Err(FitError::InsufficientData("need at least two components".into()));
        }
        if human.is_empty() {
            return Err(FitError::InsufficientData("no human points".into()));
        }
        let lookup: Vec<HashMap<&str, &SimilarityPoint>> = components
            .iter()
            .map(|(_, pts)| pts.iter().map(|p| (p.email_id.as_str(), p)).collect())
            .collect();
        let mut features = Vec::with_capacity(human.len());
        for h in human {
            let mut row = Vec::with_capacity(components.len());
            for ((metric, _), map) in components.iter().zip(&lookup) {
                let p = map
                    .get(h.email_id.as_str())
                    .ok_or_else(|| FitError::MisalignedPoints(format!("no {metric} point for `{}`", h.email_id)))?;
                row.push(p.on_unit_scale());
            }
            features.push(row);
        }
        Ok(Self {
            features,
            targets: human.iter().map(SimilarityPoint::coords).collect(),
        })
    }

    fn loss(&self, w: &[f64]) -> f64 {
        let mut total = 0.0;
        for (row, t) in self.features.iter().zip(&self.targets) {
            for c in 0..2 {
                let pred: f64 = row.iter().zip(w).map(|(f, wm)| wm * f[c]).sum();
                total += (pred - t[c]).powi(2);
            }
        }
        total / (2 * self.targets.len()) as f64
    }

    fn grad(&self, w: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; w.len()];
        for (row, t) in self.features.iter().zip(&self.targets) {
            for c in 0..2 {
                let pred: f64 = row.iter().zip(w).map(|(f, wm)| wm * f[c]).sum();
                let r = pred - t[c];
                for (gm, f) in g.iter_mut().zip(row) {
                    *gm += 2.0 * r * f[c];
                }
            }
        }
        let n = (2 * self.targets.len()) as f64;
        g.iter_mut().for_each(|v| *v /= n);
        g
    }
}

/// Mean squared error between the ensemble and the human points.
pub fn ensemble_loss(
    components: &[(MetricKind, &[SimilarityPoint])],
    human: &[SimilarityPoint],
    weights: &EnsembleWeights,
) -> Result<f64, FitError> {
    let design = Design::new(components, human)?;
    let w: Vec<f64> = components.iter().map(|(m, _)| weights.get(*m)).collect();
    Ok(design.loss(&w))
}

/// Projected gradient descent on the simplex from uniform weights.
pub fn fit_ensemble(
    components: &[(MetricKind, &[SimilarityPoint])],
    human: &[SimilarityPoint],
    config: &FitConfig,
) -> Result<(EnsembleWeights, FitReport), FitError> {
    let design = Design::new(components, human)?;
    let m = components.len();
    let (w, report) = descend(
        vec![1.0 / m as f64; m],
        config,
        |w| Ok(design.loss(w)),
        |w| Ok(design.grad(w)),
        |w, g, lr| {
            let stepped: Vec<f64> = w.iter().zip(g).map(|(a, b)| a - lr * b).collect();
            project_simplex(&stepped)
        },
    )?;
    // Guard the simplex postcondition against rounding in the projection.
    let s: f64 = w.iter().sum();
    let w: Vec<f64> = w.iter().map(|v| v / s).collect();
    let weights = EnsembleWeights::new(components.iter().map(|(k, _)| *k).zip(w))?;
    Ok((weights, report))
}
