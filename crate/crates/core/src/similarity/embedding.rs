use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::point::{MetricKind, SimilarityPoint};
use super::SimilarityError;
use crate::data::{Category, Dataset};
use crate::vector;

fn check_dims(x: &[f64], y: &[f64]) -> Result<(), SimilarityError> {
    if x.len() != y.len() {
        Err(SimilarityError::DimensionMismatch(x.len(), y.len()))
    } else {
        Ok(())
    }
}

/// `x·y / (|x| |y|)`.
pub fn cosine(x: &[f64], y: &[f64]) -> Result<f64, SimilarityError> {
    check_dims(x, y)?;
    vector::cosine(x, y).ok_or(SimilarityError::ZeroVector)
}

/// Cosine after a diagonal transform: `(Wx)·(Wy) / (|Wx| |Wy|)`.
pub fn weighted_cosine(x: &[f64], y: &[f64], w: &WeightVector) -> Result<f64, SimilarityError> {
    check_dims(x, y)?;
    check_dims(x, &w.0)?;
    let wx: Vec<f64> = x.iter().zip(&w.0).map(|(a, b)| a * b).collect();
    let wy: Vec<f64> = y.iter().zip(&w.0).map(|(a, b)| a * b).collect();
    vector::cosine(&wx, &wy).ok_or(SimilarityError::ZeroAfterWeighting)
}

/// Cosine restricted to the kept dimensions.
pub fn pruned_cosine(x: &[f64], y: &[f64], mask: &PruneMask) -> Result<f64, SimilarityError> {
    check_dims(x, y)?;
    if mask.dimension != x.len() {
        return Err(SimilarityError::DimensionMismatch(mask.dimension, x.len()));
    }
    let px: Vec<f64> = mask.kept_indices.iter().map(|&i| x[i]).collect();
    let py: Vec<f64> = mask.kept_indices.iter().map(|&i| y[i]).collect();
    vector::cosine(&px, &py).ok_or(SimilarityError::ZeroAfterMasking)
}

/// Diagonal weights, one per embedding dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(pub Vec<f64>);

impl WeightVector {
    pub fn new(w: Vec<f64>) -> Result<Self, SimilarityError> {
        if w.iter().any(|v| !v.is_finite()) {
            return Err(SimilarityError::InvalidWeights("non-finite entry".into()));
        }
        if w.iter().all(|&v| v == 0.0) {
            return Err(SimilarityError::InvalidWeights("all entries are zero".into()));
        }
        Ok(Self(w))
    }

    pub fn ones(dim: usize) -> Self {
        Self(vec![1.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Dimensions retained by pruning, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneMask {
    pub kept_indices: Vec<usize>,
    pub dimension: usize,
}

impl PruneMask {
    pub fn new(mut kept: Vec<usize>, dimension: usize) -> Result<Self, SimilarityError> {
        kept.sort_unstable();
        if kept.windows(2).any(|w| w[0] == w[1]) {
            return Err(SimilarityError::InvalidMask("duplicate index".into()));
        }
        if kept.last().is_some_and(|&i| i >= dimension) {
            return Err(SimilarityError::InvalidMask("index out of range".into()));
        }
        if kept.is_empty() {
            return Err(SimilarityError::InvalidMask("mask keeps nothing".into()));
        }
        Ok(Self {
            kept_indices: kept,
            dimension,
        })
    }

    pub fn full(dimension: usize) -> Self {
        Self {
            kept_indices: (0..dimension).collect(),
            dimension,
        }
    }

    pub fn len(&self) -> usize {
        self.kept_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kept_indices.is_empty()
    }

    /// The equivalent 0/1 weight vector.
    pub fn as_weights(&self) -> WeightVector {
        let mut w = vec![0.0; self.dimension];
        for &i in &self.kept_indices {
            w[i] = 1.0;
        }
        WeightVector(w)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryPrototype {
    pub category: Category,
    pub mean_embedding: Vec<f64>,
    /// Frequency of each expert flag among the category's emails.
    pub mean_semantic: [f64; 6],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prototypes {
    pub phishing: CategoryPrototype,
    pub ham: CategoryPrototype,
}

impl Prototypes {
    /// Category means over `subset` (all emails when `None`).
    pub fn fit(dataset: &Dataset, subset: Option<&HashSet<String>>) -> Result<Self, SimilarityError> {
        let build = |category: Category| -> Result<CategoryPrototype, SimilarityError> {
            let members: Vec<_> = dataset
                .emails()
                .iter()
                .filter(|e| e.category == category)
                .filter(|e| subset.is_none_or(|s| s.contains(&e.id)))
                .collect();
            if members.is_empty() {
                return Err(SimilarityError::EmptyCategory(category));
            }
            let rows = members
                .iter()
                .map(|e| dataset.embedding(&e.id).expect("dataset validated").values.as_slice());
            let mean_embedding = vector::mean_of(rows, dataset.dimension()).expect("nonempty");
            let mut mean_semantic = [0.0; 6];
            for e in &members {
                for (m, v) in mean_semantic.iter_mut().zip(e.semantic.to_vector()) {
                    *m += v;
                }
            }
            mean_semantic.iter_mut().for_each(|m| *m /= members.len() as f64);
            Ok(CategoryPrototype {
                category,
                mean_embedding,
                mean_semantic,
            })
        };
        Ok(Self {
            phishing: build(Category::Phishing)?,
            ham: build(Category::Ham)?,
        })
    }

    pub fn get(&self, c: Category) -> &CategoryPrototype {
        match c {
            Category::Phishing => &self.phishing,
            Category::Ham => &self.ham,
        }
    }
}

pub fn cosine_point(
    email_id: &str,
    embedding: &[f64],
    prototypes: &Prototypes,
) -> Result<SimilarityPoint, SimilarityError> {
    let p = cosine(embedding, &prototypes.phishing.mean_embedding)?;
    let h = cosine(embedding, &prototypes.ham.mean_embedding)?;
    Ok(SimilarityPoint::new(email_id, [p, h], MetricKind::Cosine))
}

pub fn weighted_point(
    email_id: &str,
    embedding: &[f64],
    prototypes: &Prototypes,
    w: &WeightVector,
) -> Result<SimilarityPoint, SimilarityError> {
    let p = weighted_cosine(embedding, &prototypes.phishing.mean_embedding, w)?;
    let h = weighted_cosine(embedding, &prototypes.ham.mean_embedding, w)?;
    Ok(SimilarityPoint::new(email_id, [p, h], MetricKind::WeightedCosine))
}

pub fn pruned_point(
    email_id: &str,
    embedding: &[f64],
    prototypes: &Prototypes,
    mask: &PruneMask,
) -> Result<SimilarityPoint, SimilarityError> {
    let p = pruned_cosine(embedding, &prototypes.phishing.mean_embedding, mask)?;
    let h = pruned_cosine(embedding, &prototypes.ham.mean_embedding, mask)?;
    Ok(SimilarityPoint::new(email_id, [p, h], MetricKind::PrunedCosine))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn cosine_examples() {
        assert_eq!(cosine(&[0.3, -2.0], &[0.3, -2.0]).unwrap(), 1.0);
        assert_eq!(cosine(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert_abs_diff_eq!(
            cosine(&[1.0, 1.0], &[1.0, 0.0]).unwrap(),
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-6
        );
        assert_eq!(cosine(&[0.0, 0.0], &[1.0, 0.0]), Err(SimilarityError::ZeroVector));
        assert!(matches!(
            cosine(&[1.0], &[1.0, 0.0]),
            Err(SimilarityError::DimensionMismatch(1, 2))
        ));
    }

    #[test]
    fn weighted_single_dimension_is_sign() {
        let w = WeightVector::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(weighted_cosine(&[2.0, 1.0, 5.0], &[-0.5, 3.0, 1.0], &w).unwrap(), -1.0);
        assert_eq!(weighted_cosine(&[2.0, 1.0, 5.0], &[0.5, 3.0, 1.0], &w).unwrap(), 1.0);
        assert_eq!(
            weighted_cosine(&[0.0, 1.0, 5.0], &[0.5, 3.0, 1.0], &w),
            Err(SimilarityError::ZeroAfterWeighting)
        );
    }

    #[test]
    fn pruned_single_dimension() {
        let m = PruneMask::new(vec![2], 3).unwrap();
        assert_eq!(pruned_cosine(&[2.0, 1.0, 5.0], &[-0.5, 3.0, -1.0], &m).unwrap(), -1.0);
        assert_eq!(
            pruned_cosine(&[2.0, 1.0, 0.0], &[-0.5, 3.0, -1.0], &m),
            Err(SimilarityError::ZeroAfterMasking)
        );
    }

    #[test]
    fn mask_validation() {
        assert!(PruneMask::new(vec![1, 1], 3).is_err());
        assert!(PruneMask::new(vec![3], 3).is_err());
        assert_eq!(PruneMask::new(vec![2, 0], 3).unwrap().kept_indices, vec![0, 2]);
        assert!(WeightVector::new(vec![0.0, 0.0]).is_err());
        assert!(WeightVector::new(vec![f64::NAN]).is_err());
    }

    fn vecs(d: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-3.0f64..3.0, d).prop_filter("nonzero", |v| vector::norm(v) > 1e-2)
    }

    proptest! {
        #[test]
        fn identities_hold_exactly(x in vecs(16), y in vecs(16)) {
            let c = cosine(&x, &y).unwrap();
            prop_assert_eq!(weighted_cosine(&x, &y, &WeightVector::ones(16)).unwrap(), c);
            prop_assert_eq!(pruned_cosine(&x, &y, &PruneMask::full(16)).unwrap(), c);
            prop_assert_eq!(cosine(&y, &x).unwrap(), c);
        }

        #[test]
        fn scale_invariance(x in vecs(8), y in vecs(8), a in 0.01f64..100.0, w in prop::collection::vec(0.1f64..2.0, 8)) {
            let ax: Vec<f64> = x.iter().map(|v| v * a).collect();
            prop_assert!((cosine(&ax, &y).unwrap() - cosine(&x, &y).unwrap()).abs() < 1e-12);
            let w = WeightVector::new(w).unwrap();
            prop_assert!((weighted_cosine(&ax, &y, &w).unwrap() - weighted_cosine(&x, &y, &w).unwrap()).abs() < 1e-12);
            prop_assert_eq!(weighted_cosine(&x, &y, &w).unwrap(), weighted_cosine(&y, &x, &w).unwrap());
        }

        #[test]
        fn pruning_is_indicator_weighting(x in vecs(10), y in vecs(10), kept in prop::collection::btree_set(0usize..10, 1..10)) {
            let mask = PruneMask::new(kept.into_iter().collect(), 10).unwrap();
            let pruned = pruned_cosine(&x, &y, &mask);
            let weighted = weighted_cosine(&x, &y, &mask.as_weights());
            match (pruned, weighted) {
                (Ok(a), Ok(b)) => prop_assert!((a - b).abs() < 1e-12),
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "disagree: {:?} vs {:?}", a, b),
            }
        }
    }
}
