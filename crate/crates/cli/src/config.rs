use std::path::Path;

use anyhow::Context;
use ibis_core::eval::EvalOptions;
use ibis_core::learn::FitConfig;
use ibis_core::CohortConfig;
use serde::{Deserialize, Serialize};

use crate::UsageError;

/// Everything a run depends on. `--config` files use this shape, and every
/// command writes the resolved version next to its outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Command line that produced this file. Ignored when loading.
    pub invocation: Vec<String>,
    /// Global seed; when set it replaces every component seed below.
    pub seed: Option<u64>,
    pub cohort: CohortConfig,
    pub fit: FitConfig,
    /// Dimensions kept by the pruned metric (`None` picks the default).
    pub prune_k: Option<usize>,
    pub eval: EvalOptions,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())).into())
    }

    pub fn apply_seed(&mut self, seed: Option<u64>) {
        if let Some(s) = seed {
            self.seed = Some(s);
        }
        if let Some(s) = self.seed {
            self.cohort.rng_seed = s;
            self.fit.rng_seed = s;
            self.eval.split_plan.rng_seed = s;
            self.eval.ibl.seed = s;
        }
    }

    pub fn write_resolved(&self, dir: &Path) -> anyhow::Result<()> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = dir.join("resolved_config.json");
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))
    }
}
