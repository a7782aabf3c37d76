use serde::{Deserialize, Serialize};

use super::FitError;
use crate::data::Category;
use crate::similarity::PruneMask;

/// Dimensions ordered from most to least predictive of the label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionRanking {
    pub order: Vec<usize>,
    /// |point-biserial correlation| per dimension (0 for constant ones).
    pub scores: Vec<f64>,
    /// Dimensions with zero variance; ranked last by index.
    pub constant: Vec<usize>,
}

/// Ranks dimensions by |point-biserial correlation| with the binary label
/// (phishing = 1). Ties go to the lower index; scores are compared at 1e-12
/// resolution so the order does not depend on summation order.
pub fn rank_dimensions(embeddings: &[&[f64]], labels: &[Category]) -> Result<DimensionRanking, FitError> {
    if embeddings.len() != labels.len() {
        return Err(FitError::MisalignedPoints(format!(
            "{} embeddings vs {} labels",
            embeddings.len(),
            labels.len()
        )));
    }
    let n_pos = labels.iter().filter(|&&c| c == Category::Phishing).count();
    if n_pos == 0 || n_pos == labels.len() {
        return Err(FitError::InsufficientData("both categories must be present".into()));
    }
    let n = labels.len() as f64;
    let dim = embeddings[0].len();
    let y: Vec<f64> = labels
        .iter()
        .map(|&c| if c == Category::Phishing { 1.0 } else { 0.0 })
        .collect();
    let y_mean = n_pos as f64 / n;
    let y_var: f64 = y.iter().map(|v| (v - y_mean).powi(2)).sum();

    let mut scores = vec![0.0; dim];
    let mut constant = Vec::new();
    for (j, score) in scores.iter_mut().enumerate() {
        let x_mean = embeddings.iter().map(|e| e[j]).sum::<f64>() / n;
        let (mut cov, mut x_var) = (0.0, 0.0);
        for (e, yi) in embeddings.iter().zip(&y) {
            let dx = e[j] - x_mean;
            cov += dx * (yi - y_mean);
            x_var += dx * dx;
        }
        if x_var <= f64::EPSILON * x_mean.abs().max(1.0) * n {
            constant.push(j);
        } else {
            *score = (cov / (x_var * y_var).sqrt()).abs().min(1.0);
        }
    }

    let is_const = |j: usize| constant.binary_search(&j).is_ok();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by_key(|&j| {
        let q = if is_const(j) {
            -1
        } else {
            (scores[j] * 1e12).round() as i64
        };
        (std::cmp::Reverse(q), j)
    });
    Ok(DimensionRanking {
        order,
        scores,
        constant,
    })
}

/// Default number of kept dimensions: 500 for 3072-dimensional embeddings,
/// otherwise the same fraction.
pub fn default_prune_k(dimension: usize) -> usize {
    if dimension == 3072 {
        500
    } else {
        ((0.1628 * dimension as f64).round() as usize).clamp(1, dimension.max(1))
    }
}

/// Keeps the top `k` dimensions of `ranking` (default per [`default_prune_k`]).
pub fn build_prune_mask(ranking: &DimensionRanking, k: Option<usize>) -> Result<PruneMask, FitError> {
    let dimension = ranking.order.len();
    let k = k.unwrap_or_else(|| default_prune_k(dimension));
    if k > dimension {
        return Err(FitError::KTooLarge { k, dimension });
    }
    if k == 0 {
        return Err(FitError::InvalidConfig("k must be >= 1".into()));
    }
    Ok(PruneMask::new(ranking.order[..k].to_vec(), dimension)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::Rng;

    fn indicator_fixture(seed: u64) -> (Vec<Vec<f64>>, Vec<Category>) {
        let mut rng = crate::rng::seeded(seed);
        let labels: Vec<Category> = (0..30)
            .map(|i| if i % 2 == 0 { Category::Phishing } else { Category::Ham })
            .collect();
        let x = labels
            .iter()
            .map(|&c| {
                let mut v: Vec<f64> = (0..8).map(|_| rng.random_range(-1.0..1.0)).collect();
                v[0] = if c == Category::Phishing { 1.0 } else { 0.0 };
                v
            })
            .collect();
        (x, labels)
    }

    /// Independent two-pass Pearson correlation against the label.
    fn brute_corr(x: &[Vec<f64>], labels: &[Category], j: usize) -> f64 {
        let xs: Vec<f64> = x.iter().map(|v| v[j]).collect();
        let ys: Vec<f64> = labels.iter().map(|&c| (c == Category::Phishing) as u8 as f64).collect();
        let mx = xs.iter().sum::<f64>() / xs.len() as f64;
        let my = ys.iter().sum::<f64>() / ys.len() as f64;
        let sxy: f64 = xs.iter().zip(&ys).map(|(a, b)| (a - mx) * (b - my)).sum();
        let sxx: f64 = xs.iter().map(|a| (a - mx).powi(2)).sum();
        let syy: f64 = ys.iter().map(|b| (b - my).powi(2)).sum();
        sxy / (sxx * syy).sqrt()
    }

    #[test]
    fn indicator_dimension_ranks_first() {
        let (x, labels) = indicator_fixture(5);
        let refs: Vec<&[f64]> = x.iter().map(Vec::as_slice).collect();
        let r = rank_dimensions(&refs, &labels).unwrap();
        assert_eq!(r.order[0], 0);
        for j in 0..8 {
            assert!((r.scores[j] - brute_corr(&x, &labels, j).abs()).abs() < 1e-12);
        }
        let mut by_brute: Vec<usize> = (0..8).collect();
        by_brute.sort_by(|&a, &b| {
            brute_corr(&x, &labels, b)
                .abs()
                .total_cmp(&brute_corr(&x, &labels, a).abs())
        });
        assert_eq!(r.order, by_brute);
        let mask = build_prune_mask(&r, Some(1)).unwrap();
        assert_eq!(mask.kept_indices, vec![0]);
    }

    #[test]
    fn constant_dimensions_flagged_in_index_order() {
        let x = vec![vec![1.0, 2.0, 3.0]; 4];
        let refs: Vec<&[f64]> = x.iter().map(Vec::as_slice).collect();
        let labels = [Category::Phishing, Category::Ham, Category::Phishing, Category::Ham];
        let r = rank_dimensions(&refs, &labels).unwrap();
        assert_eq!(r.constant, vec![0, 1, 2]);
        assert_eq!(r.order, vec![0, 1, 2]);
    }

    #[test]
    fn order_free_in_emails() {
        let (x, labels) = indicator_fixture(9);
        let mut idx: Vec<usize> = (0..x.len()).collect();
        idx.shuffle(&mut crate::rng::seeded(1));
        let refs: Vec<&[f64]> = x.iter().map(Vec::as_slice).collect();
        let shuffled: Vec<&[f64]> = idx.iter().map(|&i| x[i].as_slice()).collect();
        let shuffled_labels: Vec<Category> = idx.iter().map(|&i| labels[i]).collect();
        assert_eq!(
            rank_dimensions(&refs, &labels).unwrap().order,
            rank_dimensions(&shuffled, &shuffled_labels).unwrap().order
        );
    }

    #[test]
    fn single_category_rejected() {
        let x = [vec![1.0], vec![2.0]];
        let refs: Vec<&[f64]> = x.iter().map(Vec::as_slice).collect();
        assert!(matches!(
            rank_dimensions(&refs, &[Category::Ham, Category::Ham]),
            Err(FitError::InsufficientData(_))
        ));
    }

    #[test]
    fn mask_sizes() {
        let (x, labels) = indicator_fixture(2);
        let refs: Vec<&[f64]> = x.iter().map(Vec::as_slice).collect();
        let r = rank_dimensions(&refs, &labels).unwrap();
        for k in 1..=8 {
            assert_eq!(build_prune_mask(&r, Some(k)).unwrap().len(), k);
        }
        assert_eq!(build_prune_mask(&r, Some(8)).unwrap(), PruneMask::full(8));
        assert!(matches!(build_prune_mask(&r, Some(9)), Err(FitError::KTooLarge { .. })));
        assert_eq!(default_prune_k(3072), 500);
        assert_eq!(default_prune_k(64), 10);
    }
}
