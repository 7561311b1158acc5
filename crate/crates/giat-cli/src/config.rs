//! JSON experiment configuration.
//!
//! One document drives every command: the problem list, the strategies to
//! run, strategy parameters, the perturbation scheme, and seeding. Flags on
//! the binary override `output_dir` and `master_seed`. Per-problem seeds are
//! mixed with the master seed splitmix-style, so changing the master seed
//! re-randomizes every problem independently.

use std::fs;
use std::path::{Path, PathBuf};

use giat_core::rng::mix_seeds;
use giat_core::{
    build_problem, example1, PerturbationScheme, ProblemInstance, ProblemSpec, Strategy,
};
use serde::Deserialize;

use crate::error::CliError;

fn default_master_seed() -> u64 {
    1
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_strategies() -> Vec<Strategy> {
    Strategy::ALL.to_vec()
}

fn default_ft_eps() -> f64 {
    giat_core::thresholds::DEFAULT_FT_EPS
}

fn default_fst_alpha() -> f64 {
    giat_core::thresholds::DEFAULT_FST_ALPHA
}

fn default_fst_k() -> usize {
    giat_core::thresholds::DEFAULT_FST_K
}

/// Parameters of the built-in two-pair quadratic.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Example1Params {
    /// Weight of the first pair.
    pub w1: f64,
    /// Weight of the second pair.
    pub w2: f64,
}

/// Where a problem comes from: a generator spec or a built-in.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemSource {
    /// Generated from a [`ProblemSpec`].
    Spec(ProblemSpec),
    /// The built-in pair-coupled quadratic.
    Example1(Example1Params),
}

/// One named problem in the experiment.
#[derive(Debug, Clone, Deserialize)]
pub struct ProblemEntry {
    /// Unique name used on the command line and in reports.
    pub name: String,
    /// Per-problem seed, mixed with the master seed.
    #[serde(default)]
    pub seed: u64,
    /// Problem definition.
    #[serde(flatten)]
    pub source: ProblemSource,
}

impl ProblemEntry {
    /// Builds the instance for this entry under a master seed.
    pub fn build(&self, master_seed: u64) -> Result<ProblemInstance, CliError> {
        let seed = mix_seeds(master_seed, self.seed);
        let instance = match &self.source {
            ProblemSource::Spec(spec) => build_problem(spec, seed)?,
            ProblemSource::Example1(params) => example1(params.w1, params.w2)?,
        };
        Ok(instance)
    }
}

/// Full experiment description.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Seed every per-problem seed is mixed with.
    #[serde(default = "default_master_seed")]
    pub master_seed: u64,
    /// Directory all output files go to.
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Strategies to run, in report order.
    #[serde(default = "default_strategies")]
    pub strategies: Vec<Strategy>,
    /// Fixed threshold value.
    #[serde(default = "default_ft_eps")]
    pub ft_eps: f64,
    /// Function-space threshold control parameter.
    #[serde(default = "default_fst_alpha")]
    pub fst_alpha: f64,
    /// Function-space threshold sample count.
    #[serde(default = "default_fst_k")]
    pub fst_k: usize,
    /// Base point and step rule for the difference scheme.
    #[serde(default)]
    pub scheme: PerturbationScheme,
    /// Problems to decompose.
    pub problems: Vec<ProblemEntry>,
}

impl ExperimentConfig {
    /// Reads and validates a config document.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|err| {
            CliError::Usage(format!("cannot read config {}: {err}", path.display()))
        })?;
        let config: ExperimentConfig = serde_json::from_str(&text).map_err(|err| {
            CliError::Usage(format!("cannot parse config {}: {err}", path.display()))
        })?;
        config.validate()?;
        Ok(config)
    }

    /// Checks the config invariants.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.problems.is_empty() {
            return Err(CliError::Usage("config needs at least one problem".into()));
        }
        if self.strategies.is_empty() {
            return Err(CliError::Usage("config needs at least one strategy".into()));
        }
        if self.fst_k == 0 {
            return Err(CliError::Usage("fst_k must be at least 1".into()));
        }
        let unique: std::collections::BTreeSet<&str> =
            self.problems.iter().map(|p| p.name.as_str()).collect();
        if unique.len() != self.problems.len() {
            return Err(CliError::Usage("problem names must be unique".into()));
        }
        for entry in &self.problems {
            if let ProblemSource::Spec(spec) = &entry.source {
                spec.validate()
                    .map_err(|err| CliError::Usage(format!("problem {:?}: {err}", entry.name)))?;
            }
        }
        Ok(())
    }

    /// Looks a problem up by name.
    pub fn find_problem(&self, name: &str) -> Result<&ProblemEntry, CliError> {
        self.problems
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| CliError::Usage(format!("unknown problem {name:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "problems": [
            { "name": "ex1", "seed": 3, "example1": { "w1": 1.0, "w2": 1e6 } },
            { "name": "sep", "seed": 4, "spec": {
                "separable_dims": 6,
                "separable_base": "sphere",
                "subcomponents": [
                    { "size": 3, "base": "elliptic", "rotated": true, "weight": 2.0 }
                ],
                "lower_bound": -100.0,
                "upper_bound": 100.0,
                "weight_mode": "balanced"
            } }
        ]
    }"#;

    #[test]
    fn minimal_config_parses_with_defaults() {
        let config: ExperimentConfig = serde_json::from_str(MINIMAL).unwrap();
        config.validate().unwrap();
        assert_eq!(config.master_seed, 1);
        assert_eq!(config.strategies, Strategy::ALL.to_vec());
        assert_eq!(config.ft_eps, 1e-3);
        assert_eq!(config.fst_alpha, 1e-10);
        assert_eq!(config.fst_k, 10);
        let inst = config.problems[1].build(config.master_seed).unwrap();
        assert_eq!(inst.dimension(), 9);
    }

    #[test]
    fn imbalanced_weight_mode_parses() {
        let text = r#"{ "problems": [ { "name": "p", "spec": {
            "separable_dims": 4,
            "separable_base": "rastrigin",
            "subcomponents": [],
            "lower_bound": -5.0,
            "upper_bound": 5.0,
            "weight_mode": { "imbalanced": { "sigma": 3.0 } }
        } } ] }"#;
        let config: ExperimentConfig = serde_json::from_str(text).unwrap();
        config.validate().unwrap();
    }

    #[test]
    fn duplicate_names_rejected() {
        let text = r#"{ "problems": [
            { "name": "a", "example1": { "w1": 1.0, "w2": 1.0 } },
            { "name": "a", "example1": { "w1": 2.0, "w2": 1.0 } }
        ] }"#;
        let config: ExperimentConfig = serde_json::from_str(text).unwrap();
        assert!(config.validate().is_err());
    }

    #[test]
    fn strategy_subset_parses() {
        let text = r#"{ "strategies": ["GIAT"], "problems": [
            { "name": "a", "example1": { "w1": 1.0, "w2": 1.0 } }
        ] }"#;
        let config: ExperimentConfig = serde_json::from_str(text).unwrap();
        assert_eq!(config.strategies, vec![Strategy::Giat]);
    }

    #[test]
    fn unknown_problem_is_usage_error() {
        let config: ExperimentConfig = serde_json::from_str(MINIMAL).unwrap();
        let err = config.find_problem("nope").unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }
}
