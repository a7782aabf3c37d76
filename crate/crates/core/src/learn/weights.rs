use super::config::{descend, FitConfig, FitReport};
use super::FitError;
use crate::data::Category;
use crate::similarity::{Prototypes, SimilarityPoint, WeightVector};

/// Training pairs for the weighted-cosine objective: each email embedding
/// with its human target `[phishing, ham]`, scored against both prototypes.
#[derive(Debug, Clone)]
pub struct WeightBatch<'a> {
    pub items: Vec<(&'a [f64], [f64; 2])>,
    pub prototypes: [&'a [f64]; 2],
}

impl<'a> WeightBatch<'a> {
    pub fn new(prototypes: &'a Prototypes) -> Self {
        Self {
            items: Vec::new(),
            prototypes: [&prototypes.phishing.mean_embedding, &prototypes.ham.mean_embedding],
        }
    }

    pub fn push(&mut self, embedding: &'a [f64], target: &SimilarityPoint) {
        self.items.push((embedding, target.coords()));
    }

    fn dim(&self) -> usize {
        self.prototypes[0].len()
    }
}

/// Weighted cosine and its gradient with respect to the weights.
fn cs_and_grad(w: &[f64], x: &[f64], y: &[f64], grad: Option<&mut [f64]>) -> Option<f64> {
    let (mut n, mut a, mut b) = (0.0, 0.0, 0.0);
    for j in 0..w.len() {
        let w2 = w[j] * w[j];
        n += w2 * x[j] * y[j];
        a += w2 * x[j] * x[j];
        b += w2 * y[j] * y[j];
    }
    if a == 0.0 || b == 0.0 {
        return None;
    }
    let ab = (a * b).sqrt();
    let cs = n / ab;
    if let Some(g) = grad {
        for j in 0..w.len() {
            g[j] = 2.0 * w[j] * x[j] * y[j] / ab - cs * (w[j] * x[j] * x[j] / a + w[j] * y[j] * y[j] / b);
        }
    }
    Some(cs)
}

/// Mean over (email, category) of `((1 + CS_w(x, proto_c)) / 2 - target_c)^2`.
pub fn weighted_cosine_loss(w: &[f64], batch: &WeightBatch<'_>) -> Result<f64, FitError> {
    if batch.items.is_empty() {
        return Err(FitError::InsufficientData("empty batch".into()));
    }
    let mut total = 0.0;
    for (x, target) in &batch.items {
        for c in Category::ALL {
            let cs = cs_and_grad(w, x, batch.prototypes[c.index()], None).ok_or(FitError::NonFiniteLoss)?;
            let r = (1.0 + cs) / 2.0 - target[c.index()];
            total += r * r;
        }
    }
    let l = total / (2 * batch.items.len()) as f64;
    if l.is_finite() {
        Ok(l)
    } else {
        Err(FitError::NonFiniteLoss)
    }
}

/// Closed-form gradient of [`weighted_cosine_loss`].
pub fn analytic_weight_gradient(w: &[f64], batch: &WeightBatch<'_>) -> Result<Vec<f64>, FitError> {
    if batch.items.is_empty() {
        return Err(FitError::InsufficientData("empty batch".into()));
    }
    let d = w.len();
    let mut g = vec![0.0; d];
    let mut dcs = vec![0.0; d];
    for (x, target) in &batch.items {
        for c in Category::ALL {
            let cs =
                cs_and_grad(w, x, batch.prototypes[c.index()], Some(&mut dcs)).ok_or(FitError::NonFiniteGradient)?;
            let r = (1.0 + cs) / 2.0 - target[c.index()];
            // d/dw of r^2 is 2 r * (1/2) dcs.
            for j in 0..d {
                g[j] += r * dcs[j];
            }
        }
    }
    let n = (2 * batch.items.len()) as f64;
    g.iter_mut().for_each(|v| *v /= n);
    if g.iter().any(|v| !v.is_finite()) {
        return Err(FitError::NonFiniteGradient);
    }
    Ok(g)
}

/// Fits the diagonal weights from an all-ones start. The returned weights
/// never score worse than all-ones.
pub fn fit_weighted_cosine(batch: &WeightBatch<'_>, config: &FitConfig) -> Result<(WeightVector, FitReport), FitError> {
    config.validate()?;
    if batch.items.len() < 2 {
        return Err(FitError::InsufficientData("need at least two training emails".into()));
    }
    let (w, report) = descend(
        vec![1.0; batch.dim()],
        config,
        |w| weighted_cosine_loss(w, batch),
        |w| analytic_weight_gradient(w, batch),
        |w, g, lr| w.iter().zip(g).map(|(a, b)| a - lr * b).collect(),
    )?;
    Ok((WeightVector::new(w)?, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::similarity::{CategoryPrototype, MetricKind};
    use rand::Rng;

    fn protos(p: Vec<f64>, h: Vec<f64>) -> Prototypes {
        Prototypes {
            phishing: CategoryPrototype {
                category: Category::Phishing,
                mean_embedding: p,
                mean_semantic: [0.0; 6],
            },
            ham: CategoryPrototype {
                category: Category::Ham,
                mean_embedding: h,
                mean_semantic: [0.0; 6],
            },
        }
    }

    #[test]
    fn gradient_vanishes_at_exact_fit() {
        let pr = protos(vec![1.0, 0.2, 0.0], vec![0.0, 0.3, 1.0]);
        let xs = [vec![0.9, 0.1, 0.2], vec![0.1, 0.5, 0.8]];
        let targets: Vec<SimilarityPoint> = xs
            .iter()
            .map(|x| {
                let cs = |y: &[f64]| (1.0 + crate::vector::cosine(x, y).unwrap()) / 2.0;
                SimilarityPoint::new(
                    "e",
                    [cs(&pr.phishing.mean_embedding), cs(&pr.ham.mean_embedding)],
                    MetricKind::Human,
                )
            })
            .collect();
        let mut batch = WeightBatch::new(&pr);
        for (x, t) in xs.iter().zip(&targets) {
            batch.push(x, t);
        }
        let g = analytic_weight_gradient(&[1.0; 3], &batch).unwrap();
        assert!(g.iter().all(|v| v.abs() < 1e-15), "{g:?}");
        assert!(weighted_cosine_loss(&[1.0; 3], &batch).unwrap() < 1e-30);
    }

    #[test]
    fn fitting_reduces_loss_toward_planted_weights() {
        let mut rng = crate::rng::seeded(11);
        let d = 6;
        let planted: Vec<f64> = (0..d).map(|j| if j < 2 { 3.0 } else { 0.3 }).collect();
        let pv: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let hv: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let pr = protos(pv, hv);
        let xs: Vec<Vec<f64>> = (0..20)
            .map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let w = WeightVector(planted);
        let targets: Vec<SimilarityPoint> = xs
            .iter()
            .map(|x| {
                let s = |y: &[f64]| (1.0 + crate::similarity::weighted_cosine(x, y, &w).unwrap()) / 2.0;
                SimilarityPoint::new(
                    "e",
                    [s(&pr.phishing.mean_embedding), s(&pr.ham.mean_embedding)],
                    MetricKind::Human,
                )
            })
            .collect();
        let mut batch = WeightBatch::new(&pr);
        for (x, t) in xs.iter().zip(&targets) {
            batch.push(x, t);
        }
        let cfg = FitConfig {
            epochs: 2000,
            convergence_tol: 0.0,
            ..Default::default()
        };
        let (_, rep) = fit_weighted_cosine(&batch, &cfg).unwrap();
        assert!(rep.loss_trajectory.windows(2).all(|p| p[1] <= p[0]));
        assert!(
            rep.final_loss < rep.initial_loss * 0.05,
            "{} -> {}",
            rep.initial_loss,
            rep.final_loss
        );
    }

    #[test]
    fn zero_epochs_rejected() {
        let pr = protos(vec![1.0], vec![-1.0]);
        let batch = WeightBatch::new(&pr);
        let cfg = FitConfig {
            epochs: 0,
            ..Default::default()
        };
        assert!(matches!(
            fit_weighted_cosine(&batch, &cfg),
            Err(FitError::InvalidConfig(_))
        ));
    }
}
