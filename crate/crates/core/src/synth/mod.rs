//! Synthetic cohorts: clustered embeddings, expert flags, and participants
//! whose judgements come from IBL agents with known parameters.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use rand::Rng as _;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::data::{
    write_dataset, Author, Category, DataError, Dataset, DatasetPaths, EmailDoc, Embedding, JudgementRecord, Phase,
    SemanticFeatures, Style,
};
use crate::ibl::{IblError, IblParameters, Twin};
use crate::rng::{derive_seed, seeded};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhaseTrials {
    pub pre_train: usize,
    pub train: usize,
    pub post_train: usize,
}

impl Default for PhaseTrials {
    fn default() -> Self {
        Self {
            pre_train: 10,
            train: 40,
            post_train: 10,
        }
    }
}

impl PhaseTrials {
    pub fn total(&self) -> usize {
        self.pre_train + self.train + self.post_train
    }

    pub fn phase_of(&self, trial: usize) -> Phase {
        if trial < self.pre_train {
            Phase::PreTrain
        } else if trial < self.pre_train + self.train {
            Phase::Train
        } else {
            Phase::PostTrain
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CohortConfig {
    pub rng_seed: u64,
    pub n_emails_per_category: usize,
    pub dimension: usize,
    /// Distance between the two category mean vectors.
    pub category_separation: f64,
    /// Per-coordinate standard deviation around the category mean.
    pub noise_scale: f64,
    /// Norm of an offset shared by both category means.
    pub shared_offset: f64,
    pub n_participants: usize,
    /// Agent decay is drawn uniformly from this interval.
    pub decay_range: [f64; 2],
    /// Agent activation noise is drawn uniformly from this interval.
    pub noise_range: [f64; 2],
    /// Temperature used by agents whose noise is exactly zero.
    pub zero_noise_temperature: f64,
    pub trials: PhaseTrials,
    pub rt_base_ms: f64,
    pub rt_spread_ms: f64,
    pub phishing_flag_rate: f64,
    pub ham_flag_rate: f64,
}

impl Default for CohortConfig {
    fn default() -> Self {
        Self {
            rng_seed: 42,
            n_emails_per_category: 30,
            dimension: 64,
            category_separation: 1.75,
            noise_scale: 0.2,
            shared_offset: 1.5,
            n_participants: 20,
            decay_range: [0.3, 0.9],
            noise_range: [0.02, 0.1],
            zero_noise_temperature: 0.05,
            trials: PhaseTrials::default(),
            rt_base_ms: 800.0,
            rt_spread_ms: 2000.0,
            phishing_flag_rate: 0.5,
            ham_flag_rate: 0.05,
        }
    }
}

impl CohortConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.n_emails_per_category == 0 || self.dimension == 0 || self.n_participants == 0 {
            return Err("email, dimension and participant counts must be >= 1".into());
        }
        if self.trials.total() == 0 {
            return Err("at least one trial is required".into());
        }
        if !(self.category_separation >= 0.0) || !(self.noise_scale >= 0.0) || !(self.shared_offset >= 0.0) {
            return Err("separation, noise and offset must be >= 0".into());
        }
        for (name, r) in [("decay_range", self.decay_range), ("noise_range", self.noise_range)] {
            if !(r[0] >= 0.0 && r[1] >= r[0]) {
                return Err(format!("{name} must satisfy 0 <= lo <= hi"));
            }
        }
        if !(self.zero_noise_temperature > 0.0) {
            return Err("zero_noise_temperature must be > 0".into());
        }
        for r in [self.phishing_flag_rate, self.ham_flag_rate] {
            if !(0.0..=1.0).contains(&r) {
                return Err("flag rates must lie in [0, 1]".into());
            }
        }
        if !(self.rt_base_ms > 0.0 && self.rt_spread_ms >= 0.0) {
            return Err("reaction-time base must be > 0 and spread >= 0".into());
        }
        Ok(())
    }
}

/// What the agent saw and computed on one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialTruth {
    pub trial_index: u32,
    pub email_id: String,
    /// Noise-free blended values before the decision.
    pub v_phishing: f64,
    pub v_ham: f64,
    /// The noisy values the decision was made on.
    pub noisy_v_phishing: f64,
    pub noisy_v_ham: f64,
    pub decision: Category,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentTruth {
    pub participant_id: String,
    /// Cognitive parameters. `seed` is left at its default; the agent's own
    /// noise stream is `noise_seed`, so a replay with these parameters does
    /// not share the agent's noise draws.
    pub params: IblParameters,
    pub noise_seed: u64,
    pub trials: Vec<TrialTruth>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub config: CohortConfig,
    pub agents: Vec<AgentTruth>,
    pub email_categories: IndexMap<String, Category>,
}

impl GroundTruth {
    pub fn agent(&self, participant_id: &str) -> Option<&AgentTruth> {
        self.agents.iter().find(|a| a.participant_id == participant_id)
    }
}

fn unit_gaussian(rng: &mut crate::rng::Rng, dim: usize) -> Vec<f64> {
    let n = Normal::new(0.0, 1.0).expect("unit normal");
    let v: Vec<f64> = (0..dim).map(|_| n.sample(rng)).collect();
    let norm = crate::vector::norm(&v);
    if norm > 0.0 {
        v.into_iter().map(|x| x / norm).collect()
    } else {
        let mut e = vec![0.0; dim];
        e[0] = 1.0;
        e
    }
}

/// Emails and embeddings. Category means are `b +- (separation / 2) u` for a
/// shared offset `b` and a unit direction `u`. Values are rounded through
/// `f32` so they survive the binary embedding format unchanged.
pub fn generate_embeddings(config: &CohortConfig) -> (Vec<EmailDoc>, Vec<Embedding>) {
    let mut rng = seeded(derive_seed(config.rng_seed, "emails"));
    let d = config.dimension;
    let u = unit_gaussian(&mut rng, d);
    let b: Vec<f64> = unit_gaussian(&mut rng, d)
        .into_iter()
        .map(|x| x * config.shared_offset)
        .collect();
    let noise = Normal::new(0.0, config.noise_scale.max(0.0)).expect("finite noise scale");

    let mut emails = Vec::new();
    let mut embeddings = Vec::new();
    for category in Category::ALL {
        let sign = if category == Category::Phishing { 0.5 } else { -0.5 };
        let rate = match category {
            Category::Phishing => config.phishing_flag_rate,
            Category::Ham => config.ham_flag_rate,
        };
        for i in 0..config.n_emails_per_category {
            let id = format!("{}_{i:03}", category.as_str());
            let values: Vec<f64> = (0..d)
                .map(|j| {
                    let x = b[j] + sign * config.category_separation * u[j] + noise.sample(&mut rng);
                    x as f32 as f64
                })
                .collect();
            let flags: [bool; 6] = std::array::from_fn(|_| rng.random_bool(rate));
            let author = if rng.random_bool(0.5) {
                Author::HumanExpert
            } else {
                Author::Gpt4Written
            };
            let style = if rng.random_bool(0.5) {
                Style::Plain
            } else {
                Style::Gpt4Styled
            };
            emails.push(EmailDoc {
                body: format!("Synthetic {} email {i}.", category.as_str()),
                id: id.clone(),
                category,
                author,
                style,
                semantic: SemanticFeatures::from_flags(flags),
            });
            embeddings.push(Embedding::new(id, values));
        }
    }
    (emails, embeddings)
}

fn store_in_phase(phase: Phase) -> bool {
    phase == Phase::Train
}

/// Runs one agent over `sequence` (indices into `emails`). The agent picks
/// the larger noisy blended value, reports `|V_chosen - V_other|` clipped to
/// [0, 1] as confidence, takes `base + spread * (1 - confidence)` ms, and
/// stores the outcome only in the training phase.
pub fn simulate_participant(
    participant_id: &str,
    params: &IblParameters,
    noise_seed: u64,
    emails: &[EmailDoc],
    embeddings: &[Embedding],
    sequence: &[usize],
    config: &CohortConfig,
) -> Result<(Vec<JudgementRecord>, AgentTruth), IblError> {
    let mut agent_params = params.clone();
    agent_params.seed = noise_seed;
    let mut agent = Twin::with_query_space(
        participant_id,
        agent_params,
        embeddings.iter().map(|e| e.values.as_slice()),
    )?;
    let mut records = Vec::with_capacity(sequence.len());
    let mut trials = Vec::with_capacity(sequence.len());
    for (t, &i) in sequence.iter().enumerate() {
        let email = &emails[i];
        let q = &embeddings[i].values;
        let phase = config.trials.phase_of(t);
        let truth = agent.values(q)?;
        let (decision, v) = agent.predict(q)?;
        let conf = (v[decision.index()] - v[decision.other().index()]).clamp(0.0, 1.0);
        let correct = decision == email.category;
        agent.observe(
            &email.id,
            q,
            decision,
            if correct { 1.0 } else { 0.0 },
            store_in_phase(phase),
        );
        records.push(JudgementRecord {
            participant_id: participant_id.to_string(),
            trial_index: t as u32,
            email_id: email.id.clone(),
            phase,
            decision,
            confidence: conf,
            confidence_raw: conf,
            confidence_scale_max: 1.0,
            reaction_time_ms: config.rt_base_ms + config.rt_spread_ms * (1.0 - conf),
            correct,
            feedback_shown: phase == Phase::Train,
        });
        trials.push(TrialTruth {
            trial_index: t as u32,
            email_id: email.id.clone(),
            v_phishing: truth[0],
            v_ham: truth[1],
            noisy_v_phishing: v[0],
            noisy_v_ham: v[1],
            decision,
        });
    }
    let mut stored = params.clone();
    stored.seed = IblParameters::default().seed;
    Ok((
        records,
        AgentTruth {
            participant_id: participant_id.to_string(),
            params: stored,
            noise_seed,
            trials,
        },
    ))
}

fn sample_in(rng: &mut crate::rng::Rng, r: [f64; 2]) -> f64 {
    if r[1] > r[0] {
        rng.random_range(r[0]..r[1])
    } else {
        r[0]
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SynthError {
    #[error("invalid cohort config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Ibl(#[from] IblError),
    #[error(transparent)]
    Data(#[from] DataError),
}

/// Emails plus `n_participants` simulated agents, each shown emails drawn
/// uniformly with replacement.
pub fn generate_cohort(config: &CohortConfig) -> Result<(Dataset, GroundTruth), SynthError> {
    config.validate().map_err(SynthError::InvalidConfig)?;
    let (emails, embeddings) = generate_embeddings(config);
    let mut param_rng = seeded(derive_seed(config.rng_seed, "agents"));
    let mut judgements = Vec::new();
    let mut agents = Vec::new();
    let width = config.n_participants.to_string().len().max(2);
    for a in 0..config.n_participants {
        let pid = format!("agent_{a:0width$}");
        let noise = sample_in(&mut param_rng, config.noise_range);
        let params = IblParameters {
            decay: sample_in(&mut param_rng, config.decay_range),
            noise,
            temperature: (noise == 0.0).then_some(config.zero_noise_temperature),
            ..IblParameters::default()
        };
        let mut seq_rng = seeded(derive_seed(config.rng_seed, &format!("sequence/{pid}")));
        let sequence: Vec<usize> = (0..config.trials.total())
            .map(|_| seq_rng.random_range(0..emails.len()))
            .collect();
        let noise_seed = derive_seed(config.rng_seed, &format!("noise/{pid}"));
        let (records, truth) =
            simulate_participant(&pid, &params, noise_seed, &emails, &embeddings, &sequence, config)?;
        judgements.extend(records);
        agents.push(truth);
    }
    let email_categories = emails.iter().map(|e| (e.id.clone(), e.category)).collect();
    let dataset = Dataset::new(emails, embeddings, judgements)?;
    Ok((
        dataset,
        GroundTruth {
            config: config.clone(),
            agents,
            email_categories,
        },
    ))
}

/// Writes the dataset files plus `ground_truth.json` into `dir` and returns
/// the paths written.
pub fn write_cohort(dataset: &Dataset, truth: &GroundTruth, dir: &Path) -> Result<Vec<PathBuf>, DataError> {
    std::fs::create_dir_all(dir).map_err(|source| DataError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let paths = DatasetPaths::in_dir(dir);
    write_dataset(dataset, &paths)?;
    let gt = dir.join("ground_truth.json");
    let io = |source| DataError::Io {
        path: gt.clone(),
        source,
    };
    let f = File::create(&gt).map_err(io)?;
    serde_json::to_writer_pretty(BufWriter::new(f), truth).map_err(|e| DataError::Io {
        path: gt.clone(),
        source: e.into(),
    })?;
    Ok(vec![paths.emails, paths.embeddings, paths.judgements, gt])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> CohortConfig {
        CohortConfig {
            n_emails_per_category: 6,
            dimension: 8,
            n_participants: 3,
            ..CohortConfig::default()
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let (a, ga) = generate_cohort(&small()).unwrap();
        let (b, gb) = generate_cohort(&small()).unwrap();
        assert_eq!(a, b);
        assert_eq!(ga, gb);
    }

    #[test]
    fn trial_counts_and_phases() {
        let (d, _) = generate_cohort(&small()).unwrap();
        for p in d.participants() {
            let js: Vec<_> = d.judgements_for(p).collect();
            assert_eq!(js.len(), 60);
            assert_eq!(js.iter().filter(|j| j.feedback_shown).count(), 40);
            assert!(js.iter().all(|j| (0.0..=1.0).contains(&j.confidence)));
        }
    }

    #[test]
    fn flag_rates_follow_category() {
        let cfg = CohortConfig {
            n_emails_per_category: 200,
            dimension: 4,
            n_participants: 1,
            ..CohortConfig::default()
        };
        let (emails, _) = generate_embeddings(&cfg);
        let rate = |c: Category| {
            let es: Vec<_> = emails.iter().filter(|e| e.category == c).collect();
            es.iter()
                .map(|e| e.semantic.flags().iter().filter(|f| **f).count())
                .sum::<usize>() as f64
                / (6 * es.len()) as f64
        };
        assert!((rate(Category::Phishing) - 0.5).abs() < 0.05);
        assert!(rate(Category::Ham) < 0.1);
    }

    #[test]
    fn embeddings_survive_f32() {
        let (_, embs) = generate_embeddings(&small());
        assert!(embs.iter().flat_map(|e| &e.values).all(|&v| v as f32 as f64 == v));
    }
}
