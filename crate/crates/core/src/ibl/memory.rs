use rand_distr::{Distribution, StandardNormal};

use super::params::{AttributeMode, IblParameters, NoiseMode};
use super::IblError;
use crate::data::Category;
use crate::rng::Rng;
use crate::vector;

/// Source key of the synthetic instances added by [`prepopulate`].
pub const PRIOR_SOURCE: &str = "<prior>";

/// One stored experience: what was seen, which option was taken, and how it
/// turned out.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    /// Email id the embedding came from ([`PRIOR_SOURCE`] for prepopulation).
    pub source: String,
    pub embedding: Vec<f64>,
    pub option: Category,
    pub utility: f64,
    /// Strictly increasing timesteps at which this instance was observed.
    pub occurrences: Vec<u32>,
}

/// Per-dimension ranges used by [`AttributeMode::PerDimension`].
#[derive(Debug, Clone, PartialEq)]
struct DimRanges {
    lo: Vec<f64>,
    span: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Memory {
    instances: Vec<Instance>,
    clock: u32,
    ranges: Option<DimRanges>,
}

impl Default for Memory {
    fn default() -> Self {
        Self::new()
    }
}

impl Memory {
    /// Empty memory with the clock at t = 1.
    pub fn new() -> Self {
        Self {
            instances: Vec::new(),
            clock: 1,
            ranges: None,
        }
    }

    pub fn clock(&self) -> u32 {
        self.clock
    }

    pub fn set_clock(&mut self, t: u32) {
        self.clock = t;
    }

    pub fn advance(&mut self) {
        self.clock += 1;
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn option_instances(&self, option: Category) -> impl Iterator<Item = &Instance> {
        self.instances.iter().filter(move |i| i.option == option)
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Records an observation at the current clock. An instance with the same
    /// embedding, option and utility gains an occurrence instead of being
    /// duplicated. Returns the instance index.
    pub fn store(&mut self, source: &str, embedding: &[f64], option: Category, utility: f64) -> usize {
        self.store_at(source, embedding, option, utility, self.clock)
    }

    fn store_at(&mut self, source: &str, embedding: &[f64], option: Category, utility: f64, t: u32) -> usize {
        let existing = self.instances.iter().position(|i| {
            i.option == option && i.utility == utility && (i.source == source || i.embedding == embedding)
        });
        match existing {
            Some(idx) => {
                let occ = &mut self.instances[idx].occurrences;
                if occ.last().is_none_or(|&last| last < t) {
                    occ.push(t);
                }
                idx
            }
            None => {
                self.instances.push(Instance {
                    source: source.to_string(),
                    embedding: embedding.to_vec(),
                    option,
                    utility,
                    occurrences: vec![t],
                });
                self.instances.len() - 1
            }
        }
    }

    fn per_dimension_similarity(&self, x: &[f64], y: &[f64]) -> f64 {
        let d = x.len() as f64;
        match &self.ranges {
            Some(r) => {
                let mut total = 0.0;
                for j in 0..x.len() {
                    if r.span[j] > 0.0 {
                        let a = ((x[j] - r.lo[j]) / r.span[j]).clamp(0.0, 1.0);
                        let b = ((y[j] - r.lo[j]) / r.span[j]).clamp(0.0, 1.0);
                        total += 1.0 - (a - b).abs();
                    } else {
                        total += 1.0;
                    }
                }
                total / d
            }
            None => {
                // Without a reference range fall back to raw absolute differences.
                x.iter()
                    .zip(y)
                    .map(|(a, b)| (1.0 - (a - b).abs()).max(0.0))
                    .sum::<f64>()
                    / d
            }
        }
    }
}

/// Attribute similarity used by partial matching: (1 + cos) / 2.
pub fn attribute_similarity(x: &[f64], y: &[f64]) -> Result<f64, IblError> {
    if x.len() != y.len() {
        return Err(IblError::DimensionMismatch(x.len(), y.len()));
    }
    let cos = vector::cosine(x, y).ok_or(IblError::ZeroVector)?;
    Ok((1.0 + cos) / 2.0)
}

/// Activation of `instance` for `query` at the memory's clock. Noise is drawn
/// from `rng` when one is given.
pub fn activation(
    memory: &Memory,
    instance: &Instance,
    query: &[f64],
    params: &IblParameters,
    rng: Option<&mut Rng>,
) -> Result<f64, IblError> {
    if instance.occurrences.is_empty() {
        return Err(IblError::EmptyOccurrences);
    }
    let t = memory.clock;
    let mut strength = 0.0;
    for &occ in &instance.occurrences {
        if occ >= t {
            return Err(IblError::FutureOccurrence {
                occurrence: occ,
                clock: t,
            });
        }
        strength += f64::from(t - occ).powf(-params.decay);
    }
    let base = strength.ln();

    let mismatch = match params.attribute_mode {
        AttributeMode::Composite => {
            let s = attribute_similarity(&instance.embedding, query)?;
            params.mismatch_penalty * params.attribute_weight * (s - 1.0)
        }
        AttributeMode::PerDimension => {
            if instance.embedding.len() != query.len() {
                return Err(IblError::DimensionMismatch(instance.embedding.len(), query.len()));
            }
            // Sum over dimensions of (1/D)(S_j - 1) equals mean(S_j) - 1.
            let s = memory.per_dimension_similarity(&instance.embedding, query);
            params.mismatch_penalty * params.attribute_weight * (s - 1.0)
        }
    };

    let noise = match rng {
        Some(rng) if params.noise > 0.0 => {
            let xi: f64 = StandardNormal.sample(rng);
            let xi = match params.noise_mode {
                NoiseMode::Standard => xi,
                NoiseMode::ShiftedMean => xi - 1.0,
            };
            params.noise * xi
        }
        _ => 0.0,
    };

    let a = base + mismatch + noise;
    if a.is_finite() {
        Ok(a)
    } else {
        Err(IblError::NonFinite)
    }
}

/// Softmax of `activations / tau` with max subtraction.
pub fn softmax(activations: &[f64], tau: f64) -> Vec<f64> {
    let max = activations.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut p: Vec<f64> = activations.iter().map(|a| ((a - max) / tau).exp()).collect();
    let z: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= z);
    p
}

/// Retrieval probability of every instance of `option`, in memory order.
pub fn retrieval_probabilities(
    memory: &Memory,
    option: Category,
    query: &[f64],
    params: &IblParameters,
    mut rng: Option<&mut Rng>,
) -> Result<Vec<f64>, IblError> {
    let mut acts = Vec::new();
    for inst in memory.option_instances(option) {
        acts.push(activation(memory, inst, query, params, rng.as_deref_mut())?);
    }
    if acts.is_empty() {
        return Err(IblError::EmptyOption(option));
    }
    Ok(softmax(&acts, params.tau()))
}

/// Blended value of `option`: retrieval-weighted mean utility.
pub fn blended_value(
    memory: &Memory,
    option: Category,
    query: &[f64],
    params: &IblParameters,
    rng: Option<&mut Rng>,
) -> Result<f64, IblError> {
    let probs = retrieval_probabilities(memory, option, query, params, rng)?;
    Ok(memory
        .option_instances(option)
        .zip(&probs)
        .map(|(inst, p)| p * inst.utility)
        .sum())
}

/// Seeds an empty memory with one default-utility instance per option at
/// t = 0, anchored on the mean of `query_space`.
pub fn prepopulate<'a>(
    memory: &mut Memory,
    options: &[Category],
    query_space: impl IntoIterator<Item = &'a [f64]>,
    params: &IblParameters,
) -> Result<(), IblError> {
    let rows: Vec<&[f64]> = query_space.into_iter().collect();
    let dim = rows.first().map_or(0, |r| r.len());
    if let Some(r) = rows.iter().find(|r| r.len() != dim) {
        return Err(IblError::DimensionMismatch(dim, r.len()));
    }
    let centroid = vector::mean_of(rows.iter().copied(), dim).ok_or(IblError::ZeroVector)?;
    if params.attribute_mode == AttributeMode::PerDimension {
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for r in &rows {
            for j in 0..dim {
                lo[j] = lo[j].min(r[j]);
                hi[j] = hi[j].max(r[j]);
            }
        }
        let span = lo.iter().zip(&hi).map(|(l, h)| h - l).collect();
        memory.ranges = Some(DimRanges { lo, span });
    }
    for &option in options {
        memory.store_at(PRIOR_SOURCE, &centroid, option, params.default_utility, 0);
    }
    Ok(())
}
