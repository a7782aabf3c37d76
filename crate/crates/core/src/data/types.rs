use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::DataError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Phishing,
    Ham,
}

impl Category {
    pub const ALL: [Category; 2] = [Category::Phishing, Category::Ham];

    pub fn index(self) -> usize {
        match self {
            Category::Phishing => 0,
            Category::Ham => 1,
        }
    }

    pub fn other(self) -> Category {
        match self {
            Category::Phishing => Category::Ham,
            Category::Ham => Category::Phishing,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Phishing => "phishing",
            Category::Ham => "ham",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "phishing" | "dangerous" => Ok(Category::Phishing),
            "ham" | "safe" => Ok(Category::Ham),
            other => Err(format!("unknown category `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Author {
    HumanExpert,
    Gpt4Written,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Style {
    Plain,
    Gpt4Styled,
}

/// Expert annotations, in the fixed order used for the semantic feature vector.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemanticFeatures {
    pub link_mismatch: bool,
    pub offer: bool,
    pub urgent: bool,
    pub subject_suspicious: bool,
    pub request_credentials: bool,
    pub sender_mismatch: bool,
}

impl SemanticFeatures {
    pub const LEN: usize = 6;

    pub fn from_flags(flags: [bool; 6]) -> Self {
        Self {
            link_mismatch: flags[0],
            offer: flags[1],
            urgent: flags[2],
            subject_suspicious: flags[3],
            request_credentials: flags[4],
            sender_mismatch: flags[5],
        }
    }

    pub fn flags(&self) -> [bool; 6] {
        [
            self.link_mismatch,
            self.offer,
            self.urgent,
            self.subject_suspicious,
            self.request_credentials,
            self.sender_mismatch,
        ]
    }

    pub fn to_vector(&self) -> [f64; 6] {
        self.flags().map(|b| if b { 1.0 } else { 0.0 })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmailDoc {
    pub id: String,
    pub body: String,
    pub category: Category,
    pub author: Author,
    pub style: Style,
    pub semantic: SemanticFeatures,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub email_id: String,
    pub values: Vec<f64>,
}

impl Embedding {
    pub fn new(email_id: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            email_id: email_id.into(),
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    PreTrain,
    Train,
    PostTrain,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::PreTrain => "pre_train",
            Phase::Train => "train",
            Phase::PostTrain => "post_train",
        }
    }
}

impl FromStr for Phase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '_' | '-' | ' '))
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "pretrain" | "pre" => Ok(Phase::PreTrain),
            "train" | "training" => Ok(Phase::Train),
            "posttrain" | "post" => Ok(Phase::PostTrain),
            _ => Err(format!("unknown phase `{s}`")),
        }
    }
}

/// One categorization trial as logged.
#[derive(Debug, Clone, PartialEq)]
pub struct JudgementRecord {
    pub participant_id: String,
    /// Presentation order within the participant.
    pub trial_index: u32,
    pub email_id: String,
    pub phase: Phase,
    pub decision: Category,
    /// `confidence_raw / confidence_scale_max`, clamped to [0, 1].
    pub confidence: f64,
    pub confidence_raw: f64,
    pub confidence_scale_max: f64,
    pub reaction_time_ms: f64,
    /// Derived at load time from the referenced email's category.
    pub correct: bool,
    pub feedback_shown: bool,
}

/// A validated, immutable dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    emails: Vec<EmailDoc>,
    email_index: HashMap<String, usize>,
    embeddings: IndexMap<String, Embedding>,
    judgements: Vec<JudgementRecord>,
    dimension: usize,
}

impl Dataset {
    /// Validates every cross-reference and fills in `correct` on judgements.
    pub fn new(
        emails: Vec<EmailDoc>,
        embeddings: Vec<Embedding>,
        mut judgements: Vec<JudgementRecord>,
    ) -> Result<Self, DataError> {
        if emails.is_empty() {
            return Err(DataError::Empty);
        }
        let mut email_index = HashMap::with_capacity(emails.len());
        for (i, e) in emails.iter().enumerate() {
            if e.id.is_empty() {
                return Err(DataError::DuplicateId(String::new()));
            }
            if email_index.insert(e.id.clone(), i).is_some() {
                return Err(DataError::DuplicateId(e.id.clone()));
            }
        }

        let dimension = embeddings.first().map(Embedding::dim).unwrap_or(0);
        let mut by_id = IndexMap::with_capacity(embeddings.len());
        for emb in embeddings {
            if emb.dim() != dimension || dimension == 0 {
                return Err(DataError::DimensionMismatch {
                    found: emb.dim(),
                    id: emb.email_id,
                    expected: dimension,
                });
            }
            if emb.values.iter().any(|v| !v.is_finite()) {
                return Err(DataError::NonFinite(emb.email_id));
            }
            if !email_index.contains_key(&emb.email_id) {
                return Err(DataError::OrphanEmbedding(emb.email_id));
            }
            let id = emb.email_id.clone();
            if by_id.insert(id.clone(), emb).is_some() {
                return Err(DataError::DuplicateId(id));
            }
        }
        for e in &emails {
            if !by_id.contains_key(&e.id) {
                return Err(DataError::MissingEmbedding(e.id.clone()));
            }
        }

        let mut last: HashMap<&str, u32> = HashMap::new();
        for (n, j) in judgements.iter_mut().enumerate() {
            let Some(&idx) = email_index.get(&j.email_id) else {
                return Err(DataError::DanglingJudgement {
                    line: n + 2,
                    email_id: j.email_id.clone(),
                });
            };
            j.correct = j.decision == emails[idx].category;
        }
        for j in &judgements {
            if let Some(prev) = last.get(j.participant_id.as_str()) {
                if j.trial_index <= *prev {
                    return Err(DataError::UnsortedTrials {
                        participant: j.participant_id.clone(),
                        trial_index: j.trial_index,
                    });
                }
            }
            last.insert(&j.participant_id, j.trial_index);
        }

        Ok(Self {
            emails,
            email_index,
            embeddings: by_id,
            judgements,
            dimension,
        })
    }

    pub fn emails(&self) -> &[EmailDoc] {
        &self.emails
    }

    pub fn email(&self, id: &str) -> Option<&EmailDoc> {
        self.email_index.get(id).map(|&i| &self.emails[i])
    }

    pub fn embedding(&self, id: &str) -> Option<&Embedding> {
        self.embeddings.get(id)
    }

    /// Embeddings in file order.
    pub fn embeddings(&self) -> impl Iterator<Item = &Embedding> {
        self.embeddings.values()
    }

    pub fn judgements(&self) -> &[JudgementRecord] {
        &self.judgements
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Participant ids in order of first appearance.
    pub fn participants(&self) -> Vec<&str> {
        let mut seen = std::collections::HashSet::new();
        self.judgements
            .iter()
            .filter(|j| seen.insert(j.participant_id.as_str()))
            .map(|j| j.participant_id.as_str())
            .collect()
    }

    pub fn judgements_for<'a>(&'a self, participant: &'a str) -> impl Iterator<Item = &'a JudgementRecord> + 'a {
        self.judgements.iter().filter(move |j| j.participant_id == participant)
    }

    /// Mean embedding over all emails.
    pub fn mean_embedding(&self) -> Vec<f64> {
        let mut mean = vec![0.0; self.dimension];
        for emb in self.embeddings.values() {
            for (m, v) in mean.iter_mut().zip(&emb.values) {
                *m += v;
            }
        }
        let n = self.embeddings.len() as f64;
        mean.iter_mut().for_each(|m| *m /= n);
        mean
    }
}
