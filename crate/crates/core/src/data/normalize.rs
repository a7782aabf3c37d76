use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::types::{Category, JudgementRecord};
use super::DataError;

/// Which records share a min-max range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Grouping {
    #[default]
    PerParticipant,
    Global,
}

/// A judgement with confidence and speed rescaled to [0, 1] within its group.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedJudgement {
    pub participant_id: String,
    pub trial_index: u32,
    pub email_id: String,
    pub decision: Category,
    pub confidence: f64,
    /// 1 for the fastest response in the group, 0 for the slowest.
    pub speed: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalizeWarning {
    ConstantReactionTime { group: String },
    ConstantConfidence { group: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    pub records: Vec<NormalizedJudgement>,
    pub warnings: Vec<NormalizeWarning>,
}

/// Min-max maps of one group. A constant group maps to 1.0 so the
/// multiplicative subjective-similarity product is not zeroed out.
fn min_max(values: impl Iterator<Item = f64> + Clone) -> Option<(f64, f64)> {
    let lo = values.clone().fold(f64::INFINITY, f64::min);
    let hi = values.fold(f64::NEG_INFINITY, f64::max);
    if hi > lo {
        Some((lo, hi))
    } else {
        None
    }
}

pub fn normalize_judgements(records: &[JudgementRecord], grouping: Grouping) -> Result<Normalized, DataError> {
    if records.is_empty() {
        return Err(DataError::EmptyGroup);
    }
    let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        let key = match grouping {
            Grouping::PerParticipant => r.participant_id.as_str(),
            Grouping::Global => "",
        };
        groups.entry(key).or_default().push(i);
    }

    let mut out: Vec<Option<NormalizedJudgement>> = vec![None; records.len()];
    let mut warnings = Vec::new();
    for (key, idx) in groups {
        let conf = min_max(idx.iter().map(|&i| records[i].confidence));
        let rt = min_max(idx.iter().map(|&i| records[i].reaction_time_ms));
        if conf.is_none() {
            warnings.push(NormalizeWarning::ConstantConfidence { group: key.to_string() });
        }
        if rt.is_none() {
            warnings.push(NormalizeWarning::ConstantReactionTime { group: key.to_string() });
        }
        for &i in &idx {
            let r = &records[i];
            let confidence = conf.map_or(1.0, |(lo, hi)| (r.confidence - lo) / (hi - lo));
            let speed = rt.map_or(1.0, |(lo, hi)| 1.0 - (r.reaction_time_ms - lo) / (hi - lo));
            out[i] = Some(NormalizedJudgement {
                participant_id: r.participant_id.clone(),
                trial_index: r.trial_index,
                email_id: r.email_id.clone(),
                decision: r.decision,
                confidence,
                speed,
            });
        }
    }
    Ok(Normalized {
        records: out.into_iter().map(|r| r.expect("every record grouped")).collect(),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Phase;
    use proptest::prelude::*;

    fn rec(pid: &str, t: u32, conf: f64, rt: f64) -> JudgementRecord {
        JudgementRecord {
            participant_id: pid.into(),
            trial_index: t,
            email_id: format!("e{t}"),
            phase: Phase::Train,
            decision: Category::Phishing,
            confidence: conf,
            confidence_raw: conf,
            confidence_scale_max: 1.0,
            reaction_time_ms: rt,
            correct: true,
            feedback_shown: true,
        }
    }

    #[test]
    fn two_reaction_times() {
        let n = normalize_judgements(
            &[rec("p", 0, 0.2, 1000.0), rec("p", 1, 0.9, 3000.0)],
            Grouping::PerParticipant,
        )
        .unwrap();
        let speeds: Vec<f64> = n.records.iter().map(|r| r.speed).collect();
        assert_eq!(speeds, vec![1.0, 0.0]);
    }

    #[test]
    fn three_reaction_times() {
        let n = normalize_judgements(
            &[
                rec("p", 0, 0.2, 1000.0),
                rec("p", 1, 0.2, 2000.0),
                rec("p", 2, 0.4, 3000.0),
            ],
            Grouping::Global,
        )
        .unwrap();
        let speeds: Vec<f64> = n.records.iter().map(|r| r.speed).collect();
        assert_eq!(speeds, vec![1.0, 0.5, 0.0]);
    }

    #[test]
    fn constant_confidence_maps_to_one() {
        let n = normalize_judgements(
            &[rec("p", 0, 0.5, 1000.0), rec("p", 1, 0.5, 2000.0)],
            Grouping::PerParticipant,
        )
        .unwrap();
        assert!(n.records.iter().all(|r| r.confidence == 1.0));
        assert_eq!(
            n.warnings,
            vec![NormalizeWarning::ConstantConfidence { group: "p".into() }]
        );
    }

    #[test]
    fn grouping_isolates_participants() {
        let recs = [
            rec("a", 0, 0.1, 1000.0),
            rec("a", 1, 0.9, 2000.0),
            rec("b", 0, 0.1, 5000.0),
            rec("b", 1, 0.9, 9000.0),
        ];
        let per = normalize_judgements(&recs, Grouping::PerParticipant).unwrap();
        assert_eq!(per.records[2].speed, 1.0);
        let global = normalize_judgements(&recs, Grouping::Global).unwrap();
        assert_eq!(global.records[2].speed, 0.5);
        assert_eq!(global.records[0].speed, 1.0);
    }

    #[test]
    fn empty_is_error() {
        assert!(matches!(
            normalize_judgements(&[], Grouping::Global),
            Err(DataError::EmptyGroup)
        ));
    }

    proptest! {
        #[test]
        fn normalized_values_in_unit_interval_and_rt_order_reversed(
            rts in prop::collection::vec(100.0f64..10_000.0, 1..40),
            confs in prop::collection::vec(0.0f64..1.0, 40),
        ) {
            let recs: Vec<_> = rts.iter().enumerate()
                .map(|(i, &rt)| rec("p", i as u32, confs[i], rt)).collect();
            let n = normalize_judgements(&recs, Grouping::PerParticipant).unwrap();
            for r in &n.records {
                prop_assert!((0.0..=1.0).contains(&r.speed));
                prop_assert!((0.0..=1.0).contains(&r.confidence));
            }
            for i in 0..recs.len() {
                for j in 0..recs.len() {
                    if recs[i].reaction_time_ms < recs[j].reaction_time_ms {
                        prop_assert!(n.records[i].speed >= n.records[j].speed);
                    }
                }
            }
        }
    }
}
