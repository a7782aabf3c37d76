use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::point::{MetricKind, SimilarityPoint};
use super::SimilarityError;
use crate::data::{Category, NormalizedJudgement};

/// How per-category subjective scores become a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HumanNormalization {
    /// score_c / sum of scores.
    #[default]
    Ratio,
    /// Softmax over the scores.
    Softmax,
}

/// `cs(x|c) = p(c|x) * speed(c|x) * conf(c|x)` for `[phishing, ham]`, where
/// `p` is the fraction of judgements choosing `c` and speed and confidence
/// are means over those judgements (0 when none chose `c`).
pub fn subjective_scores(judgements: &[&NormalizedJudgement]) -> [f64; 2] {
    let n = judgements.len() as f64;
    let mut out = [0.0; 2];
    for c in Category::ALL {
        let chosen: Vec<_> = judgements.iter().filter(|j| j.decision == c).collect();
        if chosen.is_empty() {
            continue;
        }
        let k = chosen.len() as f64;
        let speed = chosen.iter().map(|j| j.speed).sum::<f64>() / k;
        let conf = chosen.iter().map(|j| j.confidence).sum::<f64>() / k;
        out[c.index()] = (k / n) * speed * conf;
    }
    out
}

fn normalize(cs: [f64; 2], mode: HumanNormalization) -> ([f64; 2], bool) {
    match mode {
        HumanNormalization::Ratio => {
            let z = cs[0] + cs[1];
            if z > 0.0 {
                ([cs[0] / z, cs[1] / z], false)
            } else {
                ([0.5, 0.5], true)
            }
        }
        HumanNormalization::Softmax => {
            let m = cs[0].max(cs[1]);
            let e = [(cs[0] - m).exp(), (cs[1] - m).exp()];
            let z = e[0] + e[1];
            ([e[0] / z, e[1] / z], cs[0] + cs[1] == 0.0)
        }
    }
}

/// Human subjective point for one email from the judgements in scope
/// (one participant or everyone).
pub fn human_subjective_point(
    email_id: &str,
    judgements: &[&NormalizedJudgement],
    mode: HumanNormalization,
) -> Result<SimilarityPoint, SimilarityError> {
    if judgements.is_empty() {
        return Err(SimilarityError::NoJudgements(email_id.to_string()));
    }
    let (sim, degenerate) = normalize(subjective_scores(judgements), mode);
    let mut p = SimilarityPoint::new(email_id, sim, MetricKind::Human);
    p.degenerate = degenerate;
    Ok(p)
}

/// Points for every email that has at least one judgement, in order of
/// first appearance.
pub fn human_points(judgements: &[NormalizedJudgement], mode: HumanNormalization) -> Vec<SimilarityPoint> {
    let mut by_email: IndexMap<&str, Vec<&NormalizedJudgement>> = IndexMap::new();
    for j in judgements {
        by_email.entry(j.email_id.as_str()).or_default().push(j);
    }
    by_email
        .into_iter()
        .map(|(id, js)| human_subjective_point(id, &js, mode).expect("group is nonempty"))
        .collect()
}

/// `s(c|x) s(c|x') / (sum_c' s(c'|x) * sum_c' s(c'|x'))` per category, for any
/// nonnegative per-category scores.
pub fn pairwise_from_values(x: [f64; 2], y: [f64; 2]) -> Result<[f64; 2], SimilarityError> {
    let denom = (x[0] + x[1]) * (y[0] + y[1]);
    if denom == 0.0 || !denom.is_finite() {
        return Err(SimilarityError::DegenerateDenominator);
    }
    Ok([x[0] * y[0] / denom, x[1] * y[1] / denom])
}

/// Pairwise human similarity from two emails' subjective scores.
pub fn pairwise_human_similarity(cs_x: [f64; 2], cs_y: [f64; 2]) -> Result<[f64; 2], SimilarityError> {
    pairwise_from_values(cs_x, cs_y)
}
