use serde::{Deserialize, Serialize};

use super::EvalError;

/// Smallest per-point log density counted toward a score.
pub const LOG_DENSITY_FLOOR: f64 = -700.0;
/// Lower bound on any bandwidth.
pub const BANDWIDTH_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Bandwidth {
    /// `n^(-1/6) * sd_j` per dimension, floored.
    #[default]
    Scott,
    Fixed([f64; 2]),
}

/// Gaussian product-kernel density over 2D points.
#[derive(Debug, Clone, PartialEq)]
pub struct KdeModel {
    points: Vec<[f64; 2]>,
    bandwidth: [f64; 2],
    log_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KdeScore {
    pub total: f64,
    /// Points whose log density hit [`LOG_DENSITY_FLOOR`].
    pub floored: usize,
}

fn sample_sd(values: impl Iterator<Item = f64> + Clone, n: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    (values.map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
}

pub fn kde_fit(points: &[[f64; 2]], bandwidth: Bandwidth) -> Result<KdeModel, EvalError> {
    if points.is_empty() {
        return Err(EvalError::EmptyPoints);
    }
    if points.iter().flatten().any(|v| !v.is_finite()) {
        return Err(EvalError::NonFiniteScore);
    }
    let n = points.len();
    let h = match bandwidth {
        Bandwidth::Scott => {
            let factor = (n as f64).powf(-1.0 / 6.0);
            [0, 1].map(|j| (factor * sample_sd(points.iter().map(|p| p[j]), n)).max(BANDWIDTH_FLOOR))
        }
        Bandwidth::Fixed(h) => {
            if !(h[0] > 0.0 && h[1] > 0.0) {
                return Err(EvalError::InvalidBandwidth);
            }
            h
        }
    };
    let log_norm = -(n as f64).ln() - (2.0 * std::f64::consts::PI).ln() - h[0].ln() - h[1].ln();
    Ok(KdeModel {
        points: points.to_vec(),
        bandwidth: h,
        log_norm,
    })
}

impl KdeModel {
    pub fn bandwidth(&self) -> [f64; 2] {
        self.bandwidth
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Log density, computed with log-sum-exp so it never underflows.
    pub fn log_density(&self, x: [f64; 2]) -> f64 {
        let [h0, h1] = self.bandwidth;
        let mut max = f64::NEG_INFINITY;
        let exps: Vec<f64> = self
            .points
            .iter()
            .map(|p| {
                let z0 = (x[0] - p[0]) / h0;
                let z1 = (x[1] - p[1]) / h1;
                let e = -0.5 * (z0 * z0 + z1 * z1);
                max = max.max(e);
                e
            })
            .collect();
        let s: f64 = exps.iter().map(|e| (e - max).exp()).sum();
        self.log_norm + max + s.ln()
    }

    pub fn density(&self, x: [f64; 2]) -> f64 {
        self.log_density(x).exp()
    }
}

/// Sum of log densities of `eval` under `model`, each floored at
/// [`LOG_DENSITY_FLOOR`].
pub fn kde_log_score(model: &KdeModel, eval: &[[f64; 2]]) -> Result<KdeScore, EvalError> {
    if eval.is_empty() {
        return Err(EvalError::EmptyEval);
    }
    let mut total = 0.0;
    let mut floored = 0;
    for &x in eval {
        let l = model.log_density(x);
        if l.is_nan() {
            return Err(EvalError::NonFiniteScore);
        }
        if l < LOG_DENSITY_FLOOR {
            floored += 1;
            total += LOG_DENSITY_FLOOR;
        } else {
            total += l;
        }
    }
    Ok(KdeScore { total, floored })
}
