use indexmap::IndexMap;

use super::human::pairwise_from_values;
use super::point::{MetricKind, SimilarityPoint};
use super::SimilarityError;
use crate::data::Dataset;
use crate::ibl::{Twin, TwinTrace};

fn normalized(v: [f64; 2]) -> Result<[f64; 2], SimilarityError> {
    let z = v[0] + v[1];
    if !(z > 0.0) {
        return Err(SimilarityError::DegenerateBlend);
    }
    Ok([v[0] / z, v[1] / z])
}

/// The twin's noise-free blended values for `query`, normalized across the
/// two categories.
pub fn ibis_point(email_id: &str, query: &[f64], twin: &Twin) -> Result<SimilarityPoint, SimilarityError> {
    let v = twin.values(query)?;
    Ok(SimilarityPoint::new(email_id, normalized(v)?, MetricKind::Ibis))
}

/// IBIS points for every email of the dataset, seen or not.
pub fn ibis_points(dataset: &Dataset, twin: &Twin) -> Result<Vec<SimilarityPoint>, SimilarityError> {
    dataset
        .emails()
        .iter()
        .map(|e| {
            let q = &dataset.embedding(&e.id).expect("dataset validated").values;
            ibis_point(&e.id, q, twin)
        })
        .collect()
}

/// Points from the twin's noise-free values at the moment each email was
/// shown, averaged over repeat presentations, in order of first appearance.
pub fn ibis_trial_points(trace: &TwinTrace) -> Result<Vec<SimilarityPoint>, SimilarityError> {
    let mut acc: IndexMap<&str, ([f64; 2], usize)> = IndexMap::new();
    for r in &trace.records {
        let [p, h] = normalized(r.v_noise_free)?;
        let e = acc.entry(r.email_id.as_str()).or_insert(([0.0; 2], 0));
        e.0[0] += p;
        e.0[1] += h;
        e.1 += 1;
    }
    Ok(acc
        .into_iter()
        .map(|(id, (s, n))| SimilarityPoint::new(id, [s[0] / n as f64, s[1] / n as f64], MetricKind::Ibis))
        .collect())
}

/// Per-category `V(c|x) V(c|x') / (sum V(.|x) * sum V(.|x'))`.
pub fn pairwise_ibis(x: &[f64], y: &[f64], twin: &Twin) -> Result<[f64; 2], SimilarityError> {
    let vx = twin.values(x)?;
    let vy = twin.values(y)?;
    pairwise_from_values(vx, vy).map_err(|_| SimilarityError::DegenerateBlend)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Category;
    use crate::ibl::IblParameters;

    fn twin() -> Twin {
        let space = [vec![1.0, 0.0], vec![0.0, 1.0]];
        Twin::with_query_space("p", IblParameters::default(), space.iter().map(Vec::as_slice)).unwrap()
    }

    #[test]
    fn fresh_twin_is_centered() {
        let p = ibis_point("e", &[1.0, 0.2], &twin()).unwrap();
        assert_eq!(p.coords(), [0.5, 0.5]);
        assert_eq!(pairwise_ibis(&[1.0, 0.2], &[0.1, 1.0], &twin()).unwrap(), [0.25, 0.25]);
    }

    #[test]
    fn normalization_of_values() {
        let n = normalized([0.8, 0.2]).unwrap();
        assert!((n[0] - 0.8).abs() < 1e-15 && (n[1] - 0.2).abs() < 1e-15);
        let pw = pairwise_from_values([0.8, 0.2], [0.8, 0.2]).unwrap();
        assert!((pw[0] - 0.64).abs() < 1e-12);
        assert_eq!(normalized([0.0, 0.0]), Err(SimilarityError::DegenerateBlend));
    }

    #[test]
    fn extreme_values_are_idempotent() {
        assert_eq!(pairwise_from_values([1.0, 0.0], [1.0, 0.0]).unwrap()[0], 1.0);
    }

    #[test]
    fn learned_twin_is_on_simplex_and_symmetric() {
        let mut t = twin();
        t.observe("a", &[1.0, 0.0], Category::Phishing, 1.0, true);
        t.observe("b", &[0.0, 1.0], Category::Phishing, 0.0, true);
        let p = ibis_point("q", &[0.9, 0.1], &t).unwrap();
        assert!((p.sim_phishing + p.sim_ham - 1.0).abs() < 1e-12);
        assert!(p.sim_phishing > 0.5);
        assert_eq!(
            pairwise_ibis(&[0.9, 0.1], &[0.2, 0.8], &t).unwrap(),
            pairwise_ibis(&[0.2, 0.8], &[0.9, 0.1], &t).unwrap()
        );
    }
}
