use serde::{Deserialize, Serialize};

use super::IblError;

/// How the attribute-similarity term of the activation is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttributeMode {
    /// The whole embedding is one attribute with similarity (1 + cos) / 2.
    #[default]
    Composite,
    /// One attribute per dimension with weight 1/D and similarity
    /// 1 - |x_j - y_j| after per-dimension min-max scaling.
    PerDimension,
}

/// Distribution of the activation noise draw before scaling by sigma.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseMode {
    /// N(0, 1).
    #[default]
    Standard,
    /// N(-1, 1).
    ShiftedMean,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IblParameters {
    /// Decay `d`.
    pub decay: f64,
    /// Mismatch penalty `mu`.
    pub mismatch_penalty: f64,
    /// Attribute weight `omega`.
    pub attribute_weight: f64,
    /// Noise scale `sigma`.
    pub noise: f64,
    /// Softmax temperature; `None` means `sigma * sqrt(2)`.
    pub temperature: Option<f64>,
    /// Utility of the prepopulated instances.
    pub default_utility: f64,
    pub seed: u64,
    pub noise_mode: NoiseMode,
    pub attribute_mode: AttributeMode,
}

impl Default for IblParameters {
    fn default() -> Self {
        Self {
            decay: 0.5,
            mismatch_penalty: 1.0,
            attribute_weight: 1.0,
            noise: 0.25,
            temperature: None,
            default_utility: 0.5,
            seed: 0,
            noise_mode: NoiseMode::Standard,
            attribute_mode: AttributeMode::Composite,
        }
    }
}

impl IblParameters {
    pub fn tau(&self) -> f64 {
        self.temperature.unwrap_or(self.noise * std::f64::consts::SQRT_2)
    }

    pub fn validate(&self) -> Result<(), IblError> {
        let bad = |m: &str| Err(IblError::InvalidParameters(m.to_string()));
        if !(self.decay >= 0.0) {
            return bad("decay must be >= 0");
        }
        if !(self.noise >= 0.0) {
            return bad("noise must be >= 0");
        }
        if !(self.tau() > 0.0) || !self.tau().is_finite() {
            return bad("temperature must be > 0 (set it explicitly when noise is 0)");
        }
        if !(0.0..=1.0).contains(&self.default_utility) {
            return bad("default utility must lie in [0, 1]");
        }
        if !self.mismatch_penalty.is_finite() || !self.attribute_weight.is_finite() {
            return bad("mismatch penalty and attribute weight must be finite");
        }
        Ok(())
    }
}

/// Replay behaviour that is not part of the cognitive model itself.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReplayOptions {
    /// Store instances for trials on which no feedback was shown.
    pub store_without_feedback: bool,
}
