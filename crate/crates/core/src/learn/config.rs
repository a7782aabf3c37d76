use serde::{Deserialize, Serialize};

use super::FitError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitConfig {
    /// Initial step size. The step is halved whenever a step would raise the
    /// loss and doubled after each accepted step.
    pub learning_rate: f64,
    pub epochs: usize,
    /// Stop once an accepted step lowers the loss by less than this.
    pub convergence_tol: f64,
    pub rng_seed: u64,
    /// Fraction of emails (stratified by category) used for fitting inside
    /// the evaluation harness.
    pub train_fraction: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.01,
            epochs: 500,
            convergence_tol: 1e-8,
            rng_seed: 0,
            train_fraction: 0.5,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<(), FitError> {
        if !(self.learning_rate > 0.0) || !self.learning_rate.is_finite() {
            return Err(FitError::InvalidConfig("learning_rate must be > 0".into()));
        }
        if self.epochs == 0 {
            return Err(FitError::InvalidConfig("epochs must be >= 1".into()));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction <= 1.0) {
            return Err(FitError::InvalidConfig("train_fraction must lie in (0, 1]".into()));
        }
        if !(self.convergence_tol >= 0.0) {
            return Err(FitError::InvalidConfig("convergence_tol must be >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub initial_loss: f64,
    pub final_loss: f64,
    pub loss_trajectory: Vec<f64>,
    pub iterations_run: usize,
    pub converged: bool,
}

/// Monotone descent with step halving and doubling. `step` maps the current
/// iterate, its gradient and a step size to a candidate iterate.
pub(crate) fn descend<L, G, S>(
    init: Vec<f64>,
    config: &FitConfig,
    loss: L,
    grad: G,
    step: S,
) -> Result<(Vec<f64>, FitReport), FitError>
where
    L: Fn(&[f64]) -> Result<f64, FitError>,
    G: Fn(&[f64]) -> Result<Vec<f64>, FitError>,
    S: Fn(&[f64], &[f64], f64) -> Vec<f64>,
{
    config.validate()?;
    let mut x = init;
    let mut current = loss(&x)?;
    if !current.is_finite() {
        return Err(FitError::NonFiniteLoss);
    }
    let mut report = FitReport {
        initial_loss: current,
        final_loss: current,
        loss_trajectory: vec![current],
        iterations_run: 0,
        converged: false,
    };
    let mut lr = config.learning_rate;
    const MAX_HALVINGS: usize = 60;

    for _ in 0..config.epochs {
        report.iterations_run += 1;
        let g = grad(&x)?;
        if g.iter().any(|v| !v.is_finite()) {
            return Err(FitError::NonFiniteGradient);
        }
        if g.iter().all(|&v| v == 0.0) {
            report.converged = true;
            break;
        }
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let candidate = step(&x, &g, lr);
            // A candidate that makes the loss undefined counts as an increase.
            match loss(&candidate) {
                Ok(l) if l.is_finite() && l <= current => {
                    accepted = Some((candidate, l));
                    break;
                }
                _ => lr *= 0.5,
            }
        }
        let Some((candidate, l)) = accepted else {
            report.converged = true;
            break;
        };
        let delta = current - l;
        x = candidate;
        current = l;
        report.loss_trajectory.push(current);
        lr *= 2.0;
        if delta < config.convergence_tol {
            report.converged = true;
            break;
        }
    }
    report.final_loss = current;
    Ok((x, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_config() {
        for c in [
            FitConfig {
                epochs: 0,
                ..Default::default()
            },
            FitConfig {
                learning_rate: 0.0,
                ..Default::default()
            },
            FitConfig {
                train_fraction: 0.0,
                ..Default::default()
            },
        ] {
            assert!(matches!(c.validate(), Err(FitError::InvalidConfig(_))));
        }
    }

    #[test]
    fn descends_a_quadratic_monotonically() {
        let cfg = FitConfig {
            learning_rate: 5.0,
            epochs: 200,
            ..Default::default()
        };
        let (x, rep) = descend(
            vec![3.0, -2.0],
            &cfg,
            |x| Ok(x[0] * x[0] + 10.0 * x[1] * x[1]),
            |x| Ok(vec![2.0 * x[0], 20.0 * x[1]]),
            |x, g, lr| x.iter().zip(g).map(|(a, b)| a - lr * b).collect(),
        )
        .unwrap();
        assert!(rep.loss_trajectory.windows(2).all(|w| w[1] <= w[0]));
        assert!(rep.final_loss < 1e-6, "{rep:?}");
        assert!(x[0].abs() < 1e-3);
    }
}
