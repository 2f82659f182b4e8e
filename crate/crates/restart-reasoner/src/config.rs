//! Global configuration: one TOML file covering every tunable, with full
//! defaults when absent. Unknown keys are rejected and every value is
//! range-checked against its owning type's invariants.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::{CorpusParams, StructureStyle};
use crate::heuristics::RestartConfig;
use crate::oracle::OracleConstants;
use crate::propagation::PropagationConstants;
use crate::trajectory::TrajectoryParams;

/// Environment variable naming the config file when no flag is given.
pub const CONFIG_ENV_VAR: &str = "RESTART_REASONER_CONFIG";

/// Harness knobs: trial counts, the restart cap, and corpus generation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HarnessParams {
    /// Trials per level and group.
    pub trials: usize,
    /// A trial aborts as unsolved once it would restart more than this.
    pub restart_cap: usize,
    pub corpus: CorpusSection,
}

impl Default for HarnessParams {
    fn default() -> Self {
        HarnessParams {
            trials: 100,
            restart_cap: 10,
            corpus: CorpusSection::default(),
        }
    }
}

/// Corpus generation section of the config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusSection {
    pub count: usize,
    pub blocks_min: usize,
    pub blocks_max: usize,
    pub pigs_min: usize,
    pub pigs_max: usize,
    pub birds_min: usize,
    pub birds_max: usize,
    pub styles: Vec<StructureStyle>,
}

impl Default for CorpusSection {
    fn default() -> Self {
        let d = CorpusParams::default();
        CorpusSection {
            count: d.count,
            blocks_min: d.blocks.0,
            blocks_max: d.blocks.1,
            pigs_min: d.pigs.0,
            pigs_max: d.pigs.1,
            birds_min: d.birds.0,
            birds_max: d.birds.1,
            styles: d.styles,
        }
    }
}

impl CorpusSection {
    pub fn params(&self, count: Option<usize>) -> CorpusParams {
        CorpusParams {
            count: count.unwrap_or(self.count),
            blocks: (self.blocks_min, self.blocks_max),
            pigs: (self.pigs_min, self.pigs_max),
            birds: (self.birds_min, self.birds_max),
            styles: self.styles.clone(),
        }
    }
}

/// Everything tunable, in one place.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GlobalConfig {
    pub propagation: PropagationConstants,
    pub trajectory: TrajectoryParams,
    pub restart: RestartConfig,
    pub oracle: OracleConstants,
    pub harness: HarnessParams,
}

impl GlobalConfig {
    /// Parse a config document and range-check it. Returns the config plus
    /// soft warnings.
    pub fn from_toml(text: &str) -> Result<(GlobalConfig, Vec<String>)> {
        let config: GlobalConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let warnings = config.check().map_err(Error::Config)?;
        Ok((config, warnings))
    }

    /// Load from a file path.
    pub fn load(path: &Path) -> Result<(GlobalConfig, Vec<String>)> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    /// Resolve the effective config: explicit path, else the environment
    /// variable, else full defaults.
    pub fn resolve(explicit: Option<&Path>) -> Result<(GlobalConfig, Vec<String>)> {
        if let Some(path) = explicit {
            return Self::load(path);
        }
        if let Ok(path) = std::env::var(CONFIG_ENV_VAR) {
            return Self::load(Path::new(&path));
        }
        Ok((GlobalConfig::default(), Vec::new()))
    }

    /// Range-check every section; hard violations are errors, questionable
    /// but legal settings come back as warnings.
    pub fn check(&self) -> std::result::Result<Vec<String>, String> {
        self.propagation.check()?;
        self.trajectory.check()?;
        let mut warnings = self.restart.check()?;
        if let Err(msg) = self.oracle.check(&self.propagation) {
            warnings.push(msg);
        }
        if self.harness.trials == 0 {
            return Err("harness.trials must be at least 1".to_string());
        }
        if self.harness.restart_cap == 0 {
            return Err("harness.restart_cap must be at least 1".to_string());
        }
        let c = &self.harness.corpus;
        if c.count == 0
            || c.blocks_min > c.blocks_max
            || c.pigs_min == 0
            || c.pigs_min > c.pigs_max
            || c.birds_min == 0
            || c.birds_min > c.birds_max
            || c.styles.is_empty()
        {
            return Err("harness.corpus ranges are empty or inverted".to_string());
        }
        Ok(warnings)
    }
}
