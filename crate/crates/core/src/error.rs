use thiserror::Error;

use crate::data::DataError;
use crate::eval::EvalError;
use crate::ibl::IblError;
use crate::learn::FitError;
use crate::similarity::SimilarityError;
use crate::synth::SynthError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Crate-level error; each module keeps its own enum and converts into this.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Ibl(#[from] IblError),
    #[error(transparent)]
    Similarity(#[from] SimilarityError),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Synth(#[from] SynthError),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numeric(&self) -> bool {
        match self {
            Error::Data(_) => false,
            Error::Ibl(e) => e.is_numeric(),
            Error::Similarity(_) => true,
            Error::Fit(e) => !matches!(e, FitError::InsufficientData(_) | FitError::InvalidConfig(_)),
            Error::Eval(e) => e.is_numeric(),
            Error::Synth(SynthError::Ibl(e)) => e.is_numeric(),
            Error::Synth(_) => false,
        }
    }
}
