//! Run configuration: built-in defaults, then an optional TOML file, then
//! command-line flags. Later layers win.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use spoof_limits::bayes::ProjectorMode;
use spoof_limits::figures::{OutputFormat, RunConfig, Scenario};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed config file {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Invalid(String),
}

/// One layer of settings; `None` leaves the layer below untouched.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub n: Option<f64>,
    pub p: Option<f64>,
    pub grid_min: Option<f64>,
    pub grid_max: Option<f64>,
    pub grid_count: Option<usize>,
    pub log: Option<bool>,
    pub seed: Option<u64>,
    pub pulses: Option<usize>,
    pub trials: Option<usize>,
    pub cutoff: Option<usize>,
    pub projector: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
}

impl Overrides {
    pub fn from_toml(text: &str, path: &Path) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    fn apply(&self, run: &mut RunConfig, out: &mut Option<PathBuf>) -> Result<(), ConfigError> {
        if let Some(v) = self.n {
            run.mean_photon_number = v;
        }
        if let Some(v) = self.p {
            run.prior_spoof = v;
        }
        if let Some(v) = self.grid_min {
            run.grid.min = v;
        }
        if let Some(v) = self.grid_max {
            run.grid.max = v;
        }
        if let Some(v) = self.grid_count {
            run.grid.count = v;
        }
        if let Some(v) = self.log {
            run.grid.log = v;
        }
        if let Some(v) = self.seed {
            run.seed = v;
        }
        if let Some(v) = self.pulses {
            run.n_pulses = v;
        }
        if let Some(v) = self.trials {
            run.n_trials = v;
        }
        if let Some(v) = self.cutoff {
            run.cutoff = Some(v);
        }
        if let Some(v) = &self.projector {
            run.projector = v
                .parse::<ProjectorMode>()
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        if let Some(v) = &self.format {
            run.format = v
                .parse::<OutputFormat>()
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        if let Some(v) = &self.out {
            *out = Some(v.clone());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub run: RunConfig,
    pub out: Option<PathBuf>,
}

/// Layer `file` (if any) and then `flags` over the defaults for `scenario`.
pub fn resolve(
    scenario: Scenario,
    file: Option<&Path>,
    flags: Overrides,
) -> Result<Resolved, ConfigError> {
    let mut run = RunConfig::defaults(scenario);
    let mut out = None;
    if let Some(path) = file {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Overrides::from_toml(&text, path)?.apply(&mut run, &mut out)?;
    }
    flags.apply(&mut run, &mut out)?;
    if run.scenario == Scenario::Bayes {
        run.grid.count = run.n_pulses + 1;
    }
    run.validate()
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
    Ok(Resolved { run, out })
}
