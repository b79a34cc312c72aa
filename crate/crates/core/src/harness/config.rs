use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dcf::{linspace, DcfParams};
use crate::error::{Error, Result};
use crate::orient::OrientThresholds;
use crate::planner::{Scenario, SearchGrid};

const SECTIONS: [&str; 5] = ["scenario", "search", "sweep", "dcf", "orient"];

/// Whole experiment record. Every field is optional in the JSON form.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub scenario: Scenario,
    pub search: SearchGrid,
    pub sweep: SweepSpec,
    pub dcf: DcfSweep,
    pub orient: OrientSettings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    pub packet_bits_list: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self { packet_bits_list: (1..=10).map(|k| k * 20_000_000).collect(), output_path: None }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.packet_bits_list.is_empty() {
            return Err(Error::Config("sweep.packet_bits_list is empty".into()));
        }
        if self.packet_bits_list.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("sweep.packet_bits_list must be strictly increasing".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DcfSweep {
    pub params: DcfParams,
    /// Station counts to sweep; `params.n_stations` is ignored here.
    pub n_values: Vec<u32>,
    pub tau_grid: Vec<f64>,
    /// Slots per Monte Carlo point; 0 disables the simulation column.
    pub monte_carlo_slots: u64,
    pub seed: u64,
}

impl Default for DcfSweep {
    fn default() -> Self {
        Self {
            params: DcfParams::default(),
            n_values: vec![5, 10, 50],
            tau_grid: linspace(0.0, 0.5, 51),
            monte_carlo_slots: 0,
            seed: 1,
        }
    }
}

impl DcfSweep {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.n_values.is_empty() || self.n_values.contains(&0) {
            return Err(Error::Config("dcf.n_values must be nonempty and >= 1".into()));
        }
        if let Some(t) = self.tau_grid.iter().find(|t| !(0.0..=1.0).contains(*t)) {
            return Err(Error::Config(format!("dcf.tau_grid value {t} outside [0, 1]")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OrientSettings {
    pub thresholds: OrientThresholds,
    /// Records per scripted profile when no trace file is given.
    pub synthetic_per_profile: usize,
    pub seed: u64,
}

impl Default for OrientSettings {
    fn default() -> Self {
        Self { thresholds: OrientThresholds::default(), synthetic_per_profile: 100, seed: 1 }
    }
}

impl Config {
    /// Reads `path` (defaults when `None`), applies `key=value` overrides in
    /// order and validates the result.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let mut doc = match path {
            Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?)
                .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?,
            None => Value::Object(Default::default()),
        };
        for o in overrides {
            apply_override(&mut doc, o)?;
        }
        let config: Config = serde_json::from_value(doc).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        self.search.validate()?;
        self.sweep.validate()?;
        self.dcf.validate()
    }
}

/// Applies one `dotted.key=value` override to a JSON document. Keys that do
/// not start with a section name are taken relative to `scenario`. Values
/// are parsed as JSON when possible and as a bare string otherwise.
pub fn apply_override(doc: &mut Value, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override {assignment:?} is not key=value")))?;
    let mut path: Vec<&str> = key.trim().split('.').collect();
    if path.iter().any(|p| p.is_empty()) {
        return Err(Error::Config(format!("override key {key:?} has an empty segment")));
    }
    if !SECTIONS.contains(&path[0]) {
        path.insert(0, "scenario");
    }
    let value = serde_json::from_str(raw.trim()).unwrap_or_else(|_| Value::String(raw.trim().to_string()));

    let mut node = doc;
    for seg in &path[..path.len() - 1] {
        if !node.is_object() {
            return Err(Error::Config(format!("override {key:?} descends into a non-object")));
        }
        node = node
            .as_object_mut()
            .expect("checked above")
            .entry(seg.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    match node.as_object_mut() {
        Some(map) => {
            map.insert(path[path.len() - 1].to_string(), value);
            Ok(())
        }
        None => Err(Error::Config(format!("override {key:?} descends into a non-object"))),
    }
}
