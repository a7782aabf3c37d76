use std::io::Write;

use rand::Rng as _;
use serde::Serialize;

use super::memory::{blended_value, prepopulate, Memory};
use super::params::{IblParameters, ReplayOptions};
use super::IblError;
use crate::data::{Category, Dataset, JudgementRecord};
use crate::rng::{self, Rng};

/// An IBL model fed one participant's experience.
#[derive(Debug, Clone)]
pub struct Twin {
    participant_id: String,
    params: IblParameters,
    memory: Memory,
    rng: Rng,
}

impl Twin {
    /// Builds a prepopulated twin whose prior anchor is the dataset mean
    /// embedding. The RNG stream is derived from `(params.seed, participant_id)`.
    pub fn new(participant_id: &str, params: IblParameters, dataset: &Dataset) -> Result<Self, IblError> {
        let space: Vec<&[f64]> = dataset.embeddings().map(|e| e.values.as_slice()).collect();
        Self::with_query_space(participant_id, params, space)
    }

    pub fn with_query_space<'a>(
        participant_id: &str,
        params: IblParameters,
        query_space: impl IntoIterator<Item = &'a [f64]>,
    ) -> Result<Self, IblError> {
        params.validate()?;
        let mut memory = Memory::new();
        prepopulate(&mut memory, &Category::ALL, query_space, &params)?;
        let rng = rng::seeded(rng::derive_seed(params.seed, participant_id));
        Ok(Self {
            participant_id: participant_id.to_string(),
            params,
            memory,
            rng,
        })
    }

    pub fn participant_id(&self) -> &str {
        &self.participant_id
    }

    pub fn params(&self) -> &IblParameters {
        &self.params
    }

    pub fn memory(&self) -> &Memory {
        &self.memory
    }

    /// Blended values `[phishing, ham]` with activation noise.
    pub fn noisy_values(&mut self, query: &[f64]) -> Result<[f64; 2], IblError> {
        let p = blended_value(
            &self.memory,
            Category::Phishing,
            query,
            &self.params,
            Some(&mut self.rng),
        )?;
        let h = blended_value(&self.memory, Category::Ham, query, &self.params, Some(&mut self.rng))?;
        Ok([p, h])
    }

    /// Blended values `[phishing, ham]` without noise; a pure function of memory.
    pub fn values(&self, query: &[f64]) -> Result<[f64; 2], IblError> {
        let p = blended_value(&self.memory, Category::Phishing, query, &self.params, None)?;
        let h = blended_value(&self.memory, Category::Ham, query, &self.params, None)?;
        Ok([p, h])
    }

    /// Argmax over noisy blended values; exact ties are broken uniformly.
    pub fn predict(&mut self, query: &[f64]) -> Result<(Category, [f64; 2]), IblError> {
        let v = self.noisy_values(query)?;
        Ok((self.choose(v), v))
    }

    pub fn choose(&mut self, v: [f64; 2]) -> Category {
        if v[0] > v[1] {
            Category::Phishing
        } else if v[1] > v[0] {
            Category::Ham
        } else if self.rng.random_bool(0.5) {
            Category::Phishing
        } else {
            Category::Ham
        }
    }

    /// Stores the outcome of the current trial (when `store`) and advances
    /// the clock.
    pub fn observe(&mut self, source: &str, query: &[f64], decision: Category, utility: f64, store: bool) {
        if store {
            self.memory.store(source, query, decision, utility);
        }
        self.memory.advance();
    }

    pub fn rng_mut(&mut self) -> &mut Rng {
        &mut self.rng
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRecord {
    pub trial_index: u32,
    pub email_id: String,
    /// Noisy blended values the prediction was made on.
    pub v_phishing: f64,
    pub v_ham: f64,
    /// Blended values with noise off, before the trial was stored.
    pub v_noise_free: [f64; 2],
    pub predicted: Category,
    pub actual: Category,
    pub utility: f64,
    pub stored: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TwinTrace {
    pub participant_id: String,
    pub records: Vec<TraceRecord>,
}

impl TwinTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// CSV with columns
    /// `participant_id,trial_index,v_phishing,v_ham,predicted,actual,utility`.
    pub fn write_csv<W: Write>(&self, w: W) -> std::io::Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record([
            "participant_id",
            "trial_index",
            "v_phishing",
            "v_ham",
            "predicted",
            "actual",
            "utility",
        ])?;
        for r in &self.records {
            wr.write_record([
                self.participant_id.clone(),
                r.trial_index.to_string(),
                r.v_phishing.to_string(),
                r.v_ham.to_string(),
                r.predicted.to_string(),
                r.actual.to_string(),
                r.utility.to_string(),
            ])?;
        }
        wr.flush()
    }
}

/// Replays a participant's trials in order: predict with the current memory,
/// then store the participant's actual decision with utility 1 when correct
/// and 0 otherwise. Trials without feedback are stored only when
/// `options.store_without_feedback` is set. Returns the trace and the twin in
/// its final state.
pub fn twin_replay<'a>(
    judgements: impl IntoIterator<Item = &'a JudgementRecord>,
    dataset: &Dataset,
    params: &IblParameters,
    options: ReplayOptions,
) -> Result<(TwinTrace, Twin), IblError> {
    let judgements: Vec<&JudgementRecord> = judgements.into_iter().collect();
    for w in judgements.windows(2) {
        if w[1].trial_index <= w[0].trial_index {
            return Err(IblError::UnsortedTrials(w[1].trial_index));
        }
    }
    let participant = judgements.first().map(|j| j.participant_id.clone()).unwrap_or_default();
    let mut twin = Twin::new(&participant, params.clone(), dataset)?;
    let mut trace = TwinTrace {
        participant_id: participant,
        records: Vec::with_capacity(judgements.len()),
    };
    for j in judgements {
        let query = &dataset
            .embedding(&j.email_id)
            .ok_or_else(|| IblError::MissingEmbedding(j.email_id.clone()))?
            .values;
        let v_noise_free = twin.values(query)?;
        let (predicted, v) = twin.predict(query)?;
        let utility = if j.correct { 1.0 } else { 0.0 };
        let store = j.feedback_shown || options.store_without_feedback;
        twin.observe(&j.email_id, query, j.decision, utility, store);
        trace.records.push(TraceRecord {
            trial_index: j.trial_index,
            email_id: j.email_id.clone(),
            v_phishing: v[0],
            v_ham: v[1],
            v_noise_free,
            predicted,
            actual: j.decision,
            utility,
            stored: store,
        });
    }
    Ok((trace, twin))
}
