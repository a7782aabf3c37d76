//! Instance-based learning model: memory, activation, retrieval, blending and
//! the replay loop that turns the model into a participant's digital twin.

mod memory;
mod params;
mod twin;

use thiserror::Error;

use crate::data::Category;

pub use memory::{
    activation, attribute_similarity, blended_value, prepopulate, retrieval_probabilities, softmax, Instance, Memory,
    PRIOR_SOURCE,
};
pub use params::{AttributeMode, IblParameters, NoiseMode, ReplayOptions};
pub use twin::{twin_replay, TraceRecord, Twin, TwinTrace};

#[derive(Debug, Error, PartialEq)]
pub enum IblError {
    #[error("invalid IBL parameters: {0}")]
    InvalidParameters(String),
    #[error("similarity undefined for a zero vector")]
    ZeroVector,
    #[error("vector dimensions differ ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("instance has no occurrences")]
    EmptyOccurrences,
    #[error("occurrence at t={occurrence} is not before the clock t={clock}")]
    FutureOccurrence { occurrence: u32, clock: u32 },
    #[error("no instances stored for option {0}")]
    EmptyOption(Category),
    #[error("trials are not sorted by trial_index (at {0})")]
    UnsortedTrials(u32),
    #[error("no embedding for email `{0}`")]
    MissingEmbedding(String),
    #[error("non-finite activation")]
    NonFinite,
}

impl IblError {
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            IblError::ZeroVector | IblError::NonFinite | IblError::EmptyOption(_)
        )
    }
}
