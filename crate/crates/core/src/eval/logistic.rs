use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::data::Category;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LogisticConfig {
    pub learning_rate: f64,
    pub max_iterations: usize,
    pub gradient_tol: f64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            max_iterations: 1000,
            gradient_tol: 1e-8,
        }
    }
}

/// Two-feature logistic classifier; the positive class is phishing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub weights: [f64; 2],
    pub bias: f64,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

impl LogisticModel {
    pub fn probability(&self, x: [f64; 2]) -> f64 {
        sigmoid(self.weights[0] * x[0] + self.weights[1] * x[1] + self.bias)
    }

    pub fn predict(&self, x: [f64; 2]) -> Category {
        if self.probability(x) >= 0.5 {
            Category::Phishing
        } else {
            Category::Ham
        }
    }

    pub fn accuracy(&self, features: &[[f64; 2]], labels: &[Category]) -> f64 {
        let hits = features
            .iter()
            .zip(labels)
            .filter(|(x, y)| self.predict(**x) == **y)
            .count();
        hits as f64 / features.len().max(1) as f64
    }
}

/// Gradient ascent on the mean log-likelihood.
pub fn logistic_fit(
    features: &[[f64; 2]],
    labels: &[Category],
    config: &LogisticConfig,
) -> Result<LogisticModel, EvalError> {
    assert_eq!(features.len(), labels.len(), "features and labels must align");
    let positives = labels.iter().filter(|c| **c == Category::Phishing).count();
    if positives == 0 || positives == labels.len() {
        return Err(EvalError::SingleClass);
    }
    let n = features.len() as f64;
    let mut m = LogisticModel {
        weights: [0.0; 2],
        bias: 0.0,
    };
    for _ in 0..config.max_iterations {
        let mut g = [0.0; 3];
        for (x, y) in features.iter().zip(labels) {
            let y = if *y == Category::Phishing { 1.0 } else { 0.0 };
            let r = y - m.probability(*x);
            g[0] += r * x[0];
            g[1] += r * x[1];
            g[2] += r;
        }
        g.iter_mut().for_each(|v| *v /= n);
        if g.iter().map(|v| v * v).sum::<f64>().sqrt() < config.gradient_tol {
            break;
        }
        m.weights[0] += config.learning_rate * g[0];
        m.weights[1] += config.learning_rate * g[1];
        m.bias += config.learning_rate * g[2];
    }
    Ok(m)
}
