//! Declarative experiment configuration in TOML.
//!
//! A config names a registry scenario or defines one inline:
//!
//! ```toml
//! scenario = "fig7a"
//! seed = 3
//! runs = 20
//! output = "results"
//! format = "csv"
//! ```
//!
//! ```toml
//! name = "my_run"
//! [scenario]
//! type = "sys_id"
//! filter_len = 9
//! n_samples = 2000
//! runs = 10
//! noise = { preset = "noise2", imp_prob = 0.05 }
//! [[scenario.algorithms]]
//! label = "rga"
//! mu = 0.45
//! params = { kind = "rga", alpha = -10.0, beta = 2.1, lambda = 0.05 }
//! ```
//!
//! A noise given as a string names a preset; a table with a `preset` key
//! starts from that preset and overrides the remaining keys.

use std::path::PathBuf;

use robustaf::chua::ChuaConfig;
use robustaf::experiments::{find_scenario, scenario_registry, ScenarioKind};
use robustaf::filters::{AlgorithmKind, KernelAlgorithm};
use robustaf::noise::NoiseKind;
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::error::ConfigError;

pub const DEFAULT_OUTPUT: &str = "results";
pub const INLINE_NAME: &str = "custom";
const TOP_LEVEL_KEYS: [&str; 6] = ["name", "scenario", "output", "format", "seed", "runs"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// A fully resolved, validated experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub name: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runs: Option<usize>,
    pub output: PathBuf,
    pub format: Format,
    pub scenario: ScenarioKind,
}

impl ExperimentConfig {
    /// Registry scenario with default output settings.
    pub fn named(name: &str, seed: u64) -> Result<Self, ConfigError> {
        let s = lookup_scenario(name)?;
        Ok(Self {
            name: s.name,
            seed,
            runs: None,
            output: PathBuf::from(DEFAULT_OUTPUT),
            format: Format::Csv,
            scenario: s.kind,
        })
    }

    /// Apply a Monte Carlo count override and re-validate.
    pub fn set_runs(&mut self, runs: usize) -> Result<(), ConfigError> {
        if runs == 0 {
            return Err(ConfigError::validation("runs", "runs must satisfy runs >= 1"));
        }
        self.runs = Some(runs);
        self.scenario.set_runs(runs);
        self.validate()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.scenario
            .validate()
            .map_err(|e| ConfigError::validation("scenario", e.to_string()))
    }
}

/// Parse with seed 0 as the default.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    parse_config_with_seed(text, 0)
}

/// Parse, filling a missing `seed` with `default_seed`.
pub fn parse_config_with_seed(text: &str, default_seed: u64) -> Result<ExperimentConfig, ConfigError> {
    let table: Table = text.parse().map_err(|e| ConfigError::syntax(text, &e))?;
    for key in table.keys() {
        if !TOP_LEVEL_KEYS.contains(&key.as_str()) {
            return Err(ConfigError::unknown("key", key, TOP_LEVEL_KEYS));
        }
    }

    let seed = match table.get("seed") {
        None => default_seed,
        Some(Value::Integer(i)) if *i >= 0 => *i as u64,
        Some(v) => {
            return Err(ConfigError::validation(
                "seed",
                format!("seed must be a non-negative integer, got {v}"),
            ))
        }
    };
    let runs = match table.get("runs") {
        None => None,
        Some(Value::Integer(i)) if *i >= 1 => Some(*i as usize),
        Some(v) => {
            return Err(ConfigError::validation(
                "runs",
                format!("runs must be an integer >= 1, got {v}"),
            ))
        }
    };
    let output = match table.get("output") {
        None => PathBuf::from(DEFAULT_OUTPUT),
        Some(Value::String(s)) if !s.is_empty() => PathBuf::from(s),
        Some(v) => {
            return Err(ConfigError::validation("output", format!("output must be a path, got {v}")))
        }
    };
    let format = match table.get("format") {
        None => Format::Csv,
        Some(Value::String(s)) => match s.as_str() {
            "csv" => Format::Csv,
            "json" => Format::Json,
            other => return Err(ConfigError::unknown("format", other, ["csv", "json"])),
        },
        Some(v) => {
            return Err(ConfigError::validation("format", format!("format must be a string, got {v}")))
        }
    };
    let explicit_name = match table.get("name") {
        None => None,
        Some(Value::String(s)) if !s.is_empty() => Some(s.clone()),
        Some(v) => {
            return Err(ConfigError::validation("name", format!("name must be a non-empty string, got {v}")))
        }
    };

    let (name, mut scenario) = match table.get("scenario") {
        None => return Err(ConfigError::validation("scenario", "missing required key 'scenario'")),
        Some(Value::String(s)) => {
            let found = lookup_scenario(s)?;
            (explicit_name.unwrap_or(found.name), found.kind)
        }
        Some(Value::Table(t)) => {
            let kind = inline_scenario(t.clone())?;
            (explicit_name.unwrap_or_else(|| INLINE_NAME.to_string()), kind)
        }
        Some(v) => {
            return Err(ConfigError::validation(
                "scenario",
                format!("scenario must be a registry name or a table, got {v}"),
            ))
        }
    };
    if let Some(r) = runs {
        scenario.set_runs(r);
    }
    let config = ExperimentConfig {
        name,
        seed,
        runs,
        output,
        format,
        scenario,
    };
    config.validate()?;
    Ok(config)
}

/// Emit a config that parses back to `config`. The scenario is always
/// written inline.
pub fn to_toml(config: &ExperimentConfig) -> Result<String, ConfigError> {
    toml::to_string(config).map_err(|e| ConfigError::validation("config", e.to_string()))
}

fn lookup_scenario(name: &str) -> Result<robustaf::experiments::Scenario, ConfigError> {
    find_scenario(name).ok_or_else(|| {
        let names: Vec<String> = scenario_registry().into_iter().map(|s| s.name).collect();
        ConfigError::unknown("scenario", name, names.iter().map(String::as_str))
    })
}

fn inline_scenario(mut t: Table) -> Result<ScenarioKind, ConfigError> {
    if let Some(noise) = t.get_mut("noise") {
        *noise = resolve_noise(noise.clone())?;
    }
    if let Some(Value::Array(algs)) = t.get("algorithms") {
        for (i, a) in algs.iter().enumerate() {
            check_algorithm_kind(i, a)?;
        }
    }
    if let Some(Value::String(ty)) = t.get("type") {
        const TYPES: [&str; 3] = ["sys_id", "time_series", "theory"];
        if !TYPES.contains(&ty.as_str()) {
            return Err(ConfigError::unknown("scenario type", ty, TYPES));
        }
    }
    ScenarioKind::deserialize(Value::Table(t))
        .map_err(|e| ConfigError::validation("scenario", e.message().to_string()))
}

fn resolve_noise(v: Value) -> Result<Value, ConfigError> {
    let (base, overrides) = match v {
        Value::String(name) => (preset(&name)?, Table::new()),
        Value::Table(mut t) => match t.remove("preset") {
            Some(Value::String(name)) => (preset(&name)?, t),
            Some(other) => {
                return Err(ConfigError::validation(
                    "scenario.noise.preset",
                    format!("preset must be a string, got {other}"),
                ))
            }
            None => {
                if let Some(Value::String(kind)) = t.get("kind") {
                    if !NoiseKind::KIND_NAMES.contains(&kind.as_str()) {
                        return Err(ConfigError::unknown("noise kind", kind, NoiseKind::KIND_NAMES));
                    }
                }
                return Ok(Value::Table(t));
            }
        },
        other => return Ok(other),
    };
    let Value::Table(mut merged) = Value::try_from(base)
        .map_err(|e| ConfigError::validation("scenario.noise", e.to_string()))?
    else {
        unreachable!("noise kinds serialize to tables")
    };
    for (k, v) in overrides {
        if k != "kind" && !merged.contains_key(&k) {
            let known: Vec<String> = merged.keys().filter(|k| *k != "kind").cloned().collect();
            return Err(ConfigError::unknown(
                "noise field",
                &k,
                known.iter().map(String::as_str),
            ));
        }
        merged.insert(k, v);
    }
    Ok(Value::Table(merged))
}

fn preset(name: &str) -> Result<NoiseKind, ConfigError> {
    NoiseKind::preset_by_name(name).map_err(|_| {
        let names = NoiseKind::preset_names();
        ConfigError::unknown("noise preset", name, names.iter().map(String::as_str))
    })
}

fn check_algorithm_kind(i: usize, a: &Value) -> Result<(), ConfigError> {
    // Linear specs nest the kind under `params`; kernel specs carry it directly.
    let (kind, known): (Option<&Value>, &[&str]) = match a.get("params") {
        Some(p) => (p.get("kind"), &AlgorithmKind::NAMES),
        None => (a.get("kind"), &KernelAlgorithm::NAMES),
    };
    match kind {
        Some(Value::String(k)) if !known.contains(&k.as_str()) => Err(ConfigError::unknown(
            &format!("algorithm (scenario.algorithms[{i}])"),
            k,
            known.iter().copied(),
        )),
        _ => Ok(()),
    }
}

/// Input of `chua-gen`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChuaGenConfig {
    /// Number of samples to write.
    pub n: usize,
    #[serde(default = "default_chua_output")]
    pub output: PathBuf,
    #[serde(default)]
    pub chua: ChuaConfig,
}

fn default_chua_output() -> PathBuf {
    PathBuf::from("chua.csv")
}

pub fn parse_chua_config(text: &str) -> Result<ChuaGenConfig, ConfigError> {
    let c: ChuaGenConfig = toml::from_str(text).map_err(|e| match e.span() {
        Some(_) if e.message().contains("unknown field") || e.message().contains("missing field") => {
            ConfigError::validation("chua-gen", e.message().to_string())
        }
        _ => ConfigError::syntax(text, &e),
    })?;
    if c.n == 0 {
        return Err(ConfigError::validation("n", "n must satisfy n >= 1"));
    }
    c.chua
        .params
        .validate()
        .map_err(|e| ConfigError::validation("chua.params", e.to_string()))?;
    if !(c.chua.h.is_finite() && c.chua.h > 0.0) {
        return Err(ConfigError::validation("chua.h", "h must satisfy h > 0"));
    }
    if c.chua.sample_every == 0 {
        return Err(ConfigError::validation(
            "chua.sample_every",
            "sample_every must satisfy sample_every >= 1",
        ));
    }
    Ok(c)
}
