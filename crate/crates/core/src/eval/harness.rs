use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kde::{kde_fit, kde_log_score, Bandwidth, KdeScore};
use super::splits::{regression_accuracy, stratified_split, MeanSd, SplitPlan};
use super::{prediction_accuracy, EvalError};
use crate::data::{normalize_judgements, Category, Dataset, EmailDoc, Grouping, JudgementRecord};
use crate::ibl::{twin_replay, IblParameters, ReplayOptions, Twin, TwinTrace};
use crate::learn::{
    build_prune_mask, fit_ensemble, fit_weighted_cosine, rank_dimensions, FitConfig, FitReport, WeightBatch,
};
use crate::similarity::{
    cosine_point, ensemble_point, human_points, ibis_points, ibis_trial_points, pruned_point, semantic_point,
    weighted_point, EnsembleWeights, HumanNormalization, MetricKind, Prototypes, PruneMask, SimilarityPoint,
    WeightVector, ENSEMBLE_COMPONENTS,
};

/// Emails the learned baselines and prototypes are fitted on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainSplit {
    pub seed: u64,
    pub train_fraction: f64,
    pub email_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightArtifact {
    pub weights: WeightVector,
    pub report: FitReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaskArtifact {
    pub mask: PruneMask,
    pub k: usize,
    /// Set when every dimension is kept, so pruned cosine equals cosine.
    pub identity_with_cosine: bool,
    /// |correlation| per dimension, by index.
    pub scores: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleArtifact {
    pub weights: EnsembleWeights,
    pub report: FitReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FittedArtifacts {
    pub split: TrainSplit,
    pub weights: Option<WeightArtifact>,
    pub mask: Option<MaskArtifact>,
    pub ensemble: Option<EnsembleArtifact>,
}

impl FittedArtifacts {
    /// Artifacts with only a split, enough for the unfitted metrics.
    pub fn unfitted(split: TrainSplit) -> Self {
        Self {
            split,
            weights: None,
            mask: None,
            ensemble: None,
        }
    }
}

/// Stratified train split of the dataset's emails.
pub fn train_split(dataset: &Dataset, config: &FitConfig) -> TrainSplit {
    let emails = dataset.emails();
    let ids: Vec<String> = if config.train_fraction >= 1.0 {
        emails.iter().map(|e| e.id.clone()).collect()
    } else {
        let labels: Vec<Category> = emails.iter().map(|e| e.category).collect();
        let (train, _) = stratified_split(&labels, config.train_fraction, config.rng_seed);
        train.into_iter().map(|i| emails[i].id.clone()).collect()
    };
    TrainSplit {
        seed: config.rng_seed,
        train_fraction: config.train_fraction,
        email_ids: ids,
    }
}

fn global_human_points(dataset: &Dataset, mode: HumanNormalization) -> Result<Vec<SimilarityPoint>, EvalError> {
    if dataset.judgements().is_empty() {
        return Err(EvalError::NoHumanPoints);
    }
    let norm = normalize_judgements(dataset.judgements(), Grouping::Global)?;
    for w in &norm.warnings {
        log::warn!("{w:?}");
    }
    Ok(human_points(&norm.records, mode))
}

/// Fits what `metrics` need. The ensemble pulls in the weighted and pruned
/// fits it combines. Targets are the all-participant human points restricted
/// to the train split.
pub fn fit_artifacts(
    dataset: &Dataset,
    metrics: &[MetricKind],
    config: &FitConfig,
    k: Option<usize>,
    human_mode: HumanNormalization,
) -> Result<FittedArtifacts, EvalError> {
    config.validate()?;
    let split = train_split(dataset, config);
    let train: HashSet<String> = split.email_ids.iter().cloned().collect();
    let prototypes = Prototypes::fit(dataset, Some(&train))?;
    let human: Vec<SimilarityPoint> = global_human_points(dataset, human_mode)?
        .into_iter()
        .filter(|p| train.contains(&p.email_id))
        .collect();

    let want = |m: MetricKind| metrics.contains(&m) || metrics.contains(&MetricKind::Ensemble);
    let mut out = FittedArtifacts::unfitted(split.clone());

    if want(MetricKind::WeightedCosine) {
        let mut batch = WeightBatch::new(&prototypes);
        for p in &human {
            batch.push(&dataset.embedding(&p.email_id).expect("validated").values, p);
        }
        let (weights, report) = fit_weighted_cosine(&batch, config)?;
        out.weights = Some(WeightArtifact { weights, report });
    }
    if want(MetricKind::PrunedCosine) {
        let rows: Vec<&EmailDoc> = dataset.emails().iter().filter(|e| train.contains(&e.id)).collect();
        let embs: Vec<&[f64]> = rows
            .iter()
            .map(|e| dataset.embedding(&e.id).expect("validated").values.as_slice())
            .collect();
        let labels: Vec<Category> = rows.iter().map(|e| e.category).collect();
        let ranking = rank_dimensions(&embs, &labels)?;
        let mask = build_prune_mask(&ranking, k)?;
        out.mask = Some(MaskArtifact {
            k: mask.len(),
            identity_with_cosine: mask.len() == mask.dimension,
            scores: ranking.scores.clone(),
            mask,
        });
    }
    if metrics.contains(&MetricKind::Ensemble) {
        let source = PointSource {
            dataset,
            prototypes: &prototypes,
            artifacts: &out,
        };
        let mut comps: Vec<(MetricKind, Vec<SimilarityPoint>)> = Vec::new();
        for m in ENSEMBLE_COMPONENTS {
            let pts = human
                .iter()
                .map(|h| source.point(m, dataset.email(&h.email_id).expect("validated")))
                .collect::<Result<Vec<_>, _>>()?;
            comps.push((m, pts));
        }
        let views: Vec<(MetricKind, &[SimilarityPoint])> = comps.iter().map(|(m, p)| (*m, p.as_slice())).collect();
        let (weights, report) = fit_ensemble(&views, &human, config)?;
        out.ensemble = Some(EnsembleArtifact { weights, report });
    }
    Ok(out)
}

/// Computes baseline metric points from fitted state.
struct PointSource<'a> {
    dataset: &'a Dataset,
    prototypes: &'a Prototypes,
    artifacts: &'a FittedArtifacts,
}

impl PointSource<'_> {
    fn point(&self, metric: MetricKind, email: &EmailDoc) -> Result<SimilarityPoint, EvalError> {
        let emb = &self.dataset.embedding(&email.id).expect("validated").values;
        let missing = |artifact| EvalError::MissingArtifact { metric, artifact };
        Ok(match metric {
            MetricKind::Semantic => semantic_point(email, self.prototypes),
            MetricKind::Cosine => cosine_point(&email.id, emb, self.prototypes)?,
            MetricKind::WeightedCosine => {
                let w = self
                    .artifacts
                    .weights
                    .as_ref()
                    .ok_or_else(|| missing("weight vector"))?;
                weighted_point(&email.id, emb, self.prototypes, &w.weights)?
            }
            MetricKind::PrunedCosine => {
                let m = self.artifacts.mask.as_ref().ok_or_else(|| missing("prune mask"))?;
                pruned_point(&email.id, emb, self.prototypes, &m.mask)?
            }
            MetricKind::Ensemble => {
                let e = self
                    .artifacts
                    .ensemble
                    .as_ref()
                    .ok_or_else(|| missing("ensemble weights"))?;
                let comps = e
                    .weights
                    .0
                    .keys()
                    .map(|&m| self.point(m, email))
                    .collect::<Result<Vec<_>, _>>()?;
                let refs: Vec<&SimilarityPoint> = comps.iter().collect();
                ensemble_point(&email.id, &refs, &e.weights)?
            }
            MetricKind::Human | MetricKind::Ibis => {
                unreachable!("{metric} points do not come from fitted baselines")
            }
        })
    }
}

/// Which side of the comparison the density is fitted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KdeDirection {
    /// Fit on the candidate metric, evaluate the human points.
    #[default]
    FitCandidate,
    /// Fit on the human points, evaluate the candidate metric.
    FitHuman,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalOptions {
    pub metrics: Vec<MetricKind>,
    pub ibl: IblParameters,
    /// Per-participant twin parameters overriding `ibl`.
    pub participant_params: BTreeMap<String, IblParameters>,
    pub replay: ReplayOptions,
    pub split_plan: SplitPlan,
    pub human_mode: HumanNormalization,
    pub direction: KdeDirection,
    pub bandwidth: Bandwidth,
    pub min_judgements: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            metrics: MetricKind::COMPARED.to_vec(),
            ibl: IblParameters::default(),
            participant_params: BTreeMap::new(),
            replay: ReplayOptions::default(),
            split_plan: SplitPlan::default(),
            human_mode: HumanNormalization::default(),
            direction: KdeDirection::default(),
            bandwidth: Bandwidth::default(),
            min_judgements: 10,
        }
    }
}

struct ParticipantState {
    id: String,
    judgements: Vec<JudgementRecord>,
    /// Points from this participant's judgements alone, first-seen order.
    human: Vec<SimilarityPoint>,
    twin: Option<TwinState>,
}

struct TwinState {
    trace: TwinTrace,
    twin: Twin,
    /// Final-state points for every dataset email, dataset order.
    final_points: Vec<SimilarityPoint>,
    /// Trial-time points for the observed emails, first-seen order.
    trial_points: Vec<SimilarityPoint>,
}

impl TwinState {
    /// Trial-time points for observed emails followed by final-state points
    /// for the rest, so every dataset email is covered once.
    fn covering_points(&self) -> Vec<SimilarityPoint> {
        let seen: HashSet<&str> = self.trial_points.iter().map(|p| p.email_id.as_str()).collect();
        let mut out = self.trial_points.clone();
        out.extend(
            self.final_points
                .iter()
                .filter(|p| !seen.contains(p.email_id.as_str()))
                .cloned(),
        );
        out
    }
}

/// Everything shared across metrics: prototypes, human points, and replayed
/// twins.
pub struct EvalContext<'a> {
    dataset: &'a Dataset,
    artifacts: &'a FittedArtifacts,
    options: &'a EvalOptions,
    prototypes: Prototypes,
    global_human: Vec<SimilarityPoint>,
    participants: Vec<ParticipantState>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AverageScore {
    pub metric: MetricKind,
    pub kde: KdeScore,
    /// Logistic accuracy predicting the true category from the points of
    /// emails outside the fitting split.
    pub category_accuracy: Option<MeanSd>,
    #[serde(skip)]
    pub points: Vec<SimilarityPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndividualScore {
    pub metric: MetricKind,
    pub kde: KdeScore,
    /// IBIS only: density fitted to the twin's points on every email.
    pub kde_all_emails: Option<f64>,
    /// None when the participant chose one category fewer than twice.
    pub regression_accuracy: Option<f64>,
    pub points_scored: usize,
    /// Emails the metric has a point for in this participant's context.
    pub points_available: usize,
    #[serde(skip)]
    pub points: Vec<SimilarityPoint>,
}

pub(crate) fn unit(points: &[SimilarityPoint]) -> Vec<[f64; 2]> {
    points.iter().map(SimilarityPoint::on_unit_scale).collect()
}

impl<'a> EvalContext<'a> {
    pub fn new(
        dataset: &'a Dataset,
        artifacts: &'a FittedArtifacts,
        options: &'a EvalOptions,
    ) -> Result<Self, EvalError> {
        options.split_plan.validate()?;
        let train: HashSet<String> = artifacts.split.email_ids.iter().cloned().collect();
        let prototypes = Prototypes::fit(dataset, Some(&train))?;
        let global_human = global_human_points(dataset, options.human_mode)?;
        let with_twins = options.metrics.contains(&MetricKind::Ibis);

        let ids: Vec<String> = dataset.participants().into_iter().map(str::to_string).collect();
        let participants = ids
            .into_par_iter()
            .map(|id| {
                let judgements: Vec<JudgementRecord> = dataset.judgements_for(&id).cloned().collect();
                let norm = normalize_judgements(&judgements, Grouping::PerParticipant)?;
                for w in &norm.warnings {
                    log::debug!("{w:?}");
                }
                let human = human_points(&norm.records, options.human_mode);
                let twin = if with_twins {
                    let params = options.participant_params.get(&id).unwrap_or(&options.ibl);
                    let (trace, twin) = twin_replay(&judgements, dataset, params, options.replay)?;
                    let final_points = ibis_points(dataset, &twin)?;
                    let trial_points = ibis_trial_points(&trace)?;
                    Some(TwinState {
                        trace,
                        twin,
                        final_points,
                        trial_points,
                    })
                } else {
                    None
                };
                Ok(ParticipantState {
                    id,
                    judgements,
                    human,
                    twin,
                })
            })
            .collect::<Result<Vec<_>, EvalError>>()?;

        Ok(Self {
            dataset,
            artifacts,
            options,
            prototypes,
            global_human,
            participants,
        })
    }

    pub fn prototypes(&self) -> &Prototypes {
        &self.prototypes
    }

    /// All-participant human points, one per judged email.
    pub fn human_points(&self) -> &[SimilarityPoint] {
        &self.global_human
    }

    pub fn participant_ids(&self) -> impl Iterator<Item = &str> {
        self.participants.iter().map(|p| p.id.as_str())
    }

    /// The replayed trace, final twin, and its points for every dataset
    /// email, when IBIS is being evaluated.
    pub fn twin(&self, participant: &str) -> Option<(&TwinTrace, &Twin, &[SimilarityPoint])> {
        self.participants
            .iter()
            .find(|p| p.id == participant)
            .and_then(|p| p.twin.as_ref())
            .map(|t| (&t.trace, &t.twin, t.final_points.as_slice()))
    }

    fn source(&self) -> PointSource<'_> {
        PointSource {
            dataset: self.dataset,
            prototypes: &self.prototypes,
            artifacts: self.artifacts,
        }
    }

    fn score(&self, candidate: &[[f64; 2]], human: &[[f64; 2]]) -> Result<KdeScore, EvalError> {
        let (fit, eval) = match self.options.direction {
            KdeDirection::FitCandidate => (candidate, human),
            KdeDirection::FitHuman => (human, candidate),
        };
        kde_log_score(&kde_fit(fit, self.options.bandwidth)?, eval)
    }

    fn twins(&self, metric: MetricKind) -> Result<Vec<&TwinState>, EvalError> {
        self.participants
            .iter()
            .map(|p| {
                p.twin.as_ref().ok_or(EvalError::MissingArtifact {
                    metric,
                    artifact: "twin replay",
                })
            })
            .collect()
    }

    /// Points of `metric` for the judged emails, aligned with
    /// [`EvalContext::human_points`]. IBIS averages every twin's points.
    fn average_points(&self, metric: MetricKind) -> Result<Vec<SimilarityPoint>, EvalError> {
        match metric {
            MetricKind::Human => Ok(self.global_human.clone()),
            MetricKind::Ibis => {
                let twins = self.twins(metric)?;
                let covering: Vec<HashMap<String, [f64; 2]>> = twins
                    .iter()
                    .map(|t| {
                        t.covering_points()
                            .into_iter()
                            .map(|p| (p.email_id, [p.sim_phishing, p.sim_ham]))
                            .collect()
                    })
                    .collect();
                let n = twins.len() as f64;
                Ok(self
                    .global_human
                    .iter()
                    .map(|h| {
                        let mut s = [0.0; 2];
                        for c in &covering {
                            let v = c[h.email_id.as_str()];
                            s[0] += v[0] / n;
                            s[1] += v[1] / n;
                        }
                        SimilarityPoint::new(&h.email_id, s, MetricKind::Ibis)
                    })
                    .collect())
            }
            _ => {
                let src = self.source();
                self.global_human
                    .iter()
                    .map(|h| src.point(metric, self.dataset.email(&h.email_id).expect("validated")))
                    .collect()
            }
        }
    }

    /// KDE score of `metric` against the all-participant human points.
    pub fn evaluate_metric_average(&self, metric: MetricKind) -> Result<AverageScore, EvalError> {
        let points = self.average_points(metric)?;
        let kde = self.score(&unit(&points), &unit(&self.global_human))?;
        if kde.floored > 0 {
            log::warn!("{metric}: {} average-level densities hit the floor", kde.floored);
        }
        // Emails the baselines were fitted on are left out.
        let fitted: HashSet<&str> = self.artifacts.split.email_ids.iter().map(String::as_str).collect();
        let held_out: Vec<SimilarityPoint> = points
            .iter()
            .filter(|p| !fitted.contains(p.email_id.as_str()))
            .cloned()
            .collect();
        let labels: Vec<Category> = held_out
            .iter()
            .map(|p| self.dataset.email(&p.email_id).expect("validated").category)
            .collect();
        let category_accuracy = match regression_accuracy(&unit(&held_out), &labels, &self.options.split_plan) {
            Ok(a) => Some(MeanSd {
                mean: a.mean,
                sd: a.sd,
                n: a.per_split.len(),
            }),
            Err(EvalError::TooFewPerCategory { .. }) => None,
            Err(e) => return Err(e),
        };
        Ok(AverageScore {
            metric,
            kde,
            category_accuracy,
            points,
        })
    }

    /// Scores `metric` on the emails one participant observed, against that
    /// participant's own human points.
    pub fn evaluate_metric_individual(
        &self,
        metric: MetricKind,
        participant: &str,
    ) -> Result<IndividualScore, EvalError> {
        let p = self
            .participants
            .iter()
            .find(|p| p.id == participant)
            .ok_or_else(|| EvalError::UnknownParticipant(participant.to_string()))?;
        if p.judgements.len() < self.options.min_judgements {
            return Err(EvalError::TooFewJudgements {
                participant: participant.to_string(),
                found: p.judgements.len(),
                required: self.options.min_judgements,
            });
        }
        let mut kde_all_emails = None;
        let (points, points_available) = match metric {
            MetricKind::Human => (p.human.clone(), p.human.len()),
            MetricKind::Ibis => {
                let t = p.twin.as_ref().ok_or(EvalError::MissingArtifact {
                    metric,
                    artifact: "twin replay",
                })?;
                let all = t.covering_points();
                kde_all_emails = Some(self.score(&unit(&all), &unit(&p.human))?.total);
                (t.trial_points.clone(), all.len())
            }
            _ => {
                let src = self.source();
                let pts = p
                    .human
                    .iter()
                    .map(|h| src.point(metric, self.dataset.email(&h.email_id).expect("validated")))
                    .collect::<Result<Vec<_>, _>>()?;
                let n = pts.len();
                (pts, n)
            }
        };
        let kde = self.score(&unit(&points), &unit(&p.human))?;

        let by_id: HashMap<&str, [f64; 2]> = points
            .iter()
            .map(|q| (q.email_id.as_str(), q.on_unit_scale()))
            .collect();
        let features: Vec<[f64; 2]> = p.judgements.iter().map(|j| by_id[j.email_id.as_str()]).collect();
        let labels: Vec<Category> = p.judgements.iter().map(|j| j.decision).collect();
        let regression_accuracy = match regression_accuracy(&features, &labels, &self.options.split_plan) {
            Ok(a) => Some(a.mean),
            Err(EvalError::TooFewPerCategory { .. }) => None,
            Err(e) => return Err(e),
        };
        Ok(IndividualScore {
            metric,
            kde,
            kde_all_emails,
            regression_accuracy,
            points_scored: points.len(),
            points_available,
            points,
        })
    }

    /// Every requested metric at both levels, plus twin accuracy.
    pub fn evaluate(&self) -> Result<Report, EvalError> {
        let metrics = &self.options.metrics;
        let averages = metrics
            .iter()
            .map(|&m| self.evaluate_metric_average(m))
            .collect::<Result<Vec<_>, _>>()?;

        let participants: Vec<ParticipantReport> = self
            .participants
            .par_iter()
            .map(|p| {
                let twin_prediction_accuracy = match &p.twin {
                    Some(t) => Some(prediction_accuracy(&t.trace)?),
                    None => None,
                };
                let mut scores = Vec::new();
                let mut skipped = None;
                for &m in metrics {
                    match self.evaluate_metric_individual(m, &p.id) {
                        Ok(s) => scores.push(s),
                        Err(e @ EvalError::TooFewJudgements { .. }) => {
                            skipped = Some(e.to_string());
                            break;
                        }
                        Err(e) => return Err(e),
                    }
                }
                let observed: HashSet<&str> = p.judgements.iter().map(|j| j.email_id.as_str()).collect();
                Ok(ParticipantReport {
                    participant_id: p.id.clone(),
                    n_judgements: p.judgements.len(),
                    n_observed_emails: observed.len(),
                    n_dataset_emails: self.dataset.emails().len(),
                    twin_prediction_accuracy,
                    skipped,
                    scores,
                })
            })
            .collect::<Result<Vec<_>, EvalError>>()?;

        let rows = averages
            .iter()
            .map(|a| {
                let m = a.metric;
                let of_metric = |p: &'_ ParticipantReport| p.scores.iter().find(|s| s.metric == m).cloned();
                let individual: Vec<IndividualScore> = participants.iter().filter_map(of_metric).collect();
                let kde: Vec<f64> = individual.iter().map(|s| s.kde.total).collect();
                let acc: Vec<f64> = individual.iter().filter_map(|s| s.regression_accuracy).collect();
                let twin: Vec<f64> = if m == MetricKind::Ibis {
                    participants.iter().filter_map(|p| p.twin_prediction_accuracy).collect()
                } else {
                    Vec::new()
                };
                EvalRow {
                    metric: m,
                    kde_score_average_participants: a.kde.total,
                    kde_average_floored: a.kde.floored,
                    kde_score_individuals: MeanSd::of(&kde),
                    regression_accuracy: MeanSd::of(&acc),
                    twin_prediction_accuracy: MeanSd::of(&twin),
                    category_accuracy: a.category_accuracy,
                    n_participants_scored: individual.len(),
                    n_participants_regression: acc.len(),
                }
            })
            .collect();

        let individual = participants.iter().find(|p| p.skipped.is_none()).map(|p| {
            let state = self
                .participants
                .iter()
                .find(|s| s.id == p.participant_id)
                .expect("same ids");
            IndividualFigure {
                participant_id: p.participant_id.clone(),
                human: state.human.clone(),
                metrics: p
                    .scores
                    .iter()
                    .map(|s| {
                        let pts = match (&state.twin, s.metric) {
                            (Some(t), MetricKind::Ibis) => t.covering_points(),
                            _ => s.points.clone(),
                        };
                        (s.metric, pts)
                    })
                    .collect(),
            }
        });
        let figures = Figures {
            human_average: self.global_human.clone(),
            average: averages.into_iter().map(|a| (a.metric, a.points)).collect(),
            individual,
        };
        Ok(Report {
            rows,
            participants,
            figures,
        })
    }
}

/// One line of the comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRow {
    pub metric: MetricKind,
    pub kde_score_average_participants: f64,
    pub kde_average_floored: usize,
    /// Mean and sd of the per-participant KDE scores.
    pub kde_score_individuals: Option<MeanSd>,
    /// Mean and sd over participants of the per-participant mean held-out
    /// logistic accuracy at predicting their decisions.
    pub regression_accuracy: Option<MeanSd>,
    /// IBIS only: twin next-decision accuracy over participants.
    pub twin_prediction_accuracy: Option<MeanSd>,
    /// Held-out accuracy predicting the true category from the points.
    pub category_accuracy: Option<MeanSd>,
    pub n_participants_scored: usize,
    pub n_participants_regression: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticipantReport {
    pub participant_id: String,
    pub n_judgements: usize,
    pub n_observed_emails: usize,
    pub n_dataset_emails: usize,
    pub twin_prediction_accuracy: Option<f64>,
    /// Why individual scoring was skipped, if it was.
    pub skipped: Option<String>,
    pub scores: Vec<IndividualScore>,
}

impl ParticipantReport {
    pub fn score(&self, metric: MetricKind) -> Option<&IndividualScore> {
        self.scores.iter().find(|s| s.metric == metric)
    }
}

/// Points behind the scatter exports.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Figures {
    pub human_average: Vec<SimilarityPoint>,
    pub average: Vec<(MetricKind, Vec<SimilarityPoint>)>,
    pub individual: Option<IndividualFigure>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndividualFigure {
    pub participant_id: String,
    pub human: Vec<SimilarityPoint>,
    /// IBIS carries points for every dataset email, baselines only the
    /// observed ones.
    pub metrics: Vec<(MetricKind, Vec<SimilarityPoint>)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub rows: Vec<EvalRow>,
    pub participants: Vec<ParticipantReport>,
    #[serde(skip)]
    pub figures: Figures,
}

impl Report {
    pub fn row(&self, metric: MetricKind) -> Option<&EvalRow> {
        self.rows.iter().find(|r| r.metric == metric)
    }
}
