use super::embedding::Prototypes;
use super::point::{MetricKind, SimilarityPoint};
use crate::data::{Category, EmailDoc};
use crate::vector;

/// Cosine between the email's six expert flags and each category's mean flag
/// frequencies. A zero vector on either side scores 0.
pub fn semantic_point(email: &EmailDoc, prototypes: &Prototypes) -> SimilarityPoint {
    let x = email.semantic.to_vector();
    let sim = Category::ALL.map(|c| vector::cosine(&x, &prototypes.get(c).mean_semantic).unwrap_or(0.0));
    SimilarityPoint::new(email.id.clone(), sim, MetricKind::Semantic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Author, SemanticFeatures, Style};
    use crate::similarity::CategoryPrototype;

    fn email(flags: [bool; 6]) -> EmailDoc {
        EmailDoc {
            id: "e".into(),
            body: String::new(),
            category: Category::Phishing,
            author: Author::HumanExpert,
            style: Style::Plain,
            semantic: SemanticFeatures::from_flags(flags),
        }
    }

    fn protos(p: [f64; 6], h: [f64; 6]) -> Prototypes {
        Prototypes {
            phishing: CategoryPrototype {
                category: Category::Phishing,
                mean_embedding: vec![1.0],
                mean_semantic: p,
            },
            ham: CategoryPrototype {
                category: Category::Ham,
                mean_embedding: vec![1.0],
                mean_semantic: h,
            },
        }
    }

    #[test]
    fn identical_one_hot() {
        let pr = protos([1.0, 0.0, 0.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let p = semantic_point(&email([true, false, false, false, false, false]), &pr);
        assert_eq!(p.coords(), [1.0, 0.0]);
    }

    #[test]
    fn all_zero_email() {
        let pr = protos([0.5; 6], [0.05; 6]);
        assert_eq!(semantic_point(&email([false; 6]), &pr).coords(), [0.0, 0.0]);
    }

    #[test]
    fn two_flags_against_one_hot() {
        let pr = protos([1.0, 0.0, 0.0, 0.0, 0.0, 0.0], [0.0; 6]);
        let p = semantic_point(&email([true, true, false, false, false, false]), &pr);
        assert!((p.sim_phishing - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert_eq!(p.sim_ham, 0.0);
    }
}
