//! Run configuration.
//!
//! A config file is TOML with one section per command:
//!
//! ```toml
//! [validate]
//! scenario = "gaussian"
//! eps = 0.3
//! mu = 0.3
//! ```
//!
//! Every key of every section is checked, so a typo anywhere in the file is
//! reported even when that section is not the one being run. Command-line
//! flags are merged into the active section before the checks run.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    RunSwe,
    RunBoussinesq,
    MakeSoliton,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::RunSwe => "run-swe",
            Command::RunBoussinesq => "run-boussinesq",
            Command::MakeSoliton => "make-soliton",
            Command::Validate => "validate",
        }
    }

    /// Config section read by the command.
    pub fn section(self) -> &'static str {
        match self {
            Command::RunSwe => "swe",
            Command::RunBoussinesq => "boussinesq",
            Command::MakeSoliton => "soliton",
            Command::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RightEdge {
    #[default]
    Extrapolate,
    Wall,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Initial {
    #[default]
    Rest,
    Gaussian,
    Soliton,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Generating,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ForcingKind {
    #[default]
    Sine,
    Zero,
    /// Elevation column of a trace CSV.
    Trace,
    /// Passing soliton seen from the left edge.
    Soliton,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweConfig {
    pub g: f64,
    pub h0: f64,
    pub courant: f64,
    pub x_left: f64,
    pub length: f64,
    pub n_x: usize,
    pub t_final: f64,
    pub amplitude: f64,
    pub period: f64,
    pub right: RightEdge,
    pub strict_cfl: bool,
    /// Extra snapshots at these times.
    pub snapshot_times: Vec<f64>,
    /// Extra snapshot every this many steps; 0 disables.
    pub snapshot_stride: usize,
}

impl Default for SweConfig {
    fn default() -> Self {
        Self {
            g: 9.81,
            h0: 1.0,
            courant: 0.25,
            x_left: 0.0,
            length: 10.0,
            n_x: 200,
            t_final: 5.0,
            amplitude: 0.05,
            period: 2.0,
            right: RightEdge::Extrapolate,
            strict_cfl: false,
            snapshot_times: Vec::new(),
            snapshot_stride: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoussinesqConfig {
    pub eps: Option<f64>,
    pub mu: Option<f64>,
    pub courant: f64,
    pub x_left: f64,
    pub length: f64,
    pub n_x: usize,
    pub t_final: f64,
    pub initial: Initial,
    pub boundary: Boundary,
    pub forcing: ForcingKind,
    pub amplitude: f64,
    pub period: f64,
    pub trace_file: Option<PathBuf>,
    pub right: RightEdge,
    pub zeta_max: f64,
    pub x_center: f64,
    /// Extra snapshots at these times.
    pub snapshot_times: Vec<f64>,
    /// Extra snapshot every this many steps; 0 disables.
    pub snapshot_stride: usize,
}

impl Default for BoussinesqConfig {
    fn default() -> Self {
        Self {
            eps: None,
            mu: None,
            courant: 0.9,
            x_left: 0.0,
            length: 10.0,
            n_x: 200,
            t_final: 5.0,
            initial: Initial::Rest,
            boundary: Boundary::Generating,
            forcing: ForcingKind::Sine,
            amplitude: 1.0,
            period: 5.0,
            trace_file: None,
            right: RightEdge::Extrapolate,
            zeta_max: 1.0,
            x_center: 0.0,
            snapshot_times: Vec::new(),
            snapshot_stride: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolitonConfig {
    pub eps: Option<f64>,
    pub mu: Option<f64>,
    pub zeta_max: f64,
    /// `+1` right-going, `-1` left-going.
    pub direction: f64,
    /// Integration step of the profile ODE.
    pub step: f64,
    /// Spacing of the written profile.
    pub spacing: f64,
}

impl Default for SolitonConfig {
    fn default() -> Self {
        Self {
            eps: None,
            mu: None,
            zeta_max: 1.0,
            direction: 1.0,
            step: wavegen_core::soliton::DEFAULT_STEP,
            spacing: 0.01,
        }
    }
}

/// Unset fields keep the scenario's defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidateConfig {
    pub scenario: Option<String>,
    pub eps: Option<f64>,
    pub mu: Option<f64>,
    pub courant: Option<f64>,
    pub t_final: Option<f64>,
    pub reference_nx: Option<usize>,
    pub coarse_nx: Option<Vec<usize>>,
    /// Worker threads for the coarse runs.
    pub parallel: usize,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct FileConfig {
    swe: Option<SweConfig>,
    boussinesq: Option<BoussinesqConfig>,
    soliton: Option<SolitonConfig>,
    validate: Option<ValidateConfig>,
}

/// Fully checked description of one command.
#[derive(Debug, Clone, PartialEq)]
pub enum RunConfig {
    Swe(SweConfig),
    Boussinesq(BoussinesqConfig),
    Soliton(SolitonConfig),
    Validate(ValidateConfig),
}

/// Key/value pairs that replace entries of the active section.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides(pub Vec<(String, Value)>);

impl Overrides {
    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.0.push((key.to_string(), value.into()));
    }

    /// Parses `key=value`; the value is read as TOML, falling back to a bare string.
    pub fn parse_assignment(&mut self, text: &str) -> Result<()> {
        let (key, raw) = text
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("override {text:?} is not key=value")))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(CliError::Config(format!("override {text:?} has an empty key")));
        }
        let raw = raw.trim();
        let value = format!("v = {raw}")
            .parse::<Table>()
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| Value::String(raw.to_string()));
        self.set(key, value);
        Ok(())
    }
}

/// Field names of a section, taken from its serialized default.
fn fields<T: Default + Serialize>() -> Vec<String> {
    match serde_json::to_value(T::default()) {
        Ok(serde_json::Value::Object(m)) => m.keys().cloned().collect(),
        _ => Vec::new(),
    }
}

/// Every `section.key` (or unknown `section`) in the file.
fn unknown_keys(table: &Table) -> Vec<String> {
    let mut unknown = Vec::new();
    for (name, value) in table {
        let known = match name.as_str() {
            "swe" => fields::<SweConfig>(),
            "boussinesq" => fields::<BoussinesqConfig>(),
            "soliton" => fields::<SolitonConfig>(),
            "validate" => fields::<ValidateConfig>(),
            _ => {
                unknown.push(name.clone());
                continue;
            }
        };
        if let Value::Table(section) = value {
            unknown.extend(
                section
                    .keys()
                    .filter(|k| !known.contains(k))
                    .map(|k| format!("{name}.{k}")),
            );
        }
    }
    unknown
}

fn read_table(path: &Path) -> Result<Table> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    text.parse::<Table>()
        .map_err(|e| CliError::Config(format!("{}: {}", path.display(), e.message())))
}

/// Reads the file (if any), merges `overrides` into the section of
/// `command` and validates the result.
pub fn parse_config(path: Option<&Path>, command: Command, overrides: &Overrides) -> Result<RunConfig> {
    let mut table = match path {
        Some(p) => read_table(p)?,
        None => Table::new(),
    };
    if !overrides.0.is_empty() {
        let section = table
            .entry(command.section())
            .or_insert_with(|| Value::Table(Table::new()));
        let Value::Table(section) = section else {
            return Err(CliError::Config(format!("{} must be a table", command.section())));
        };
        for (k, v) in &overrides.0 {
            section.insert(k.clone(), v.clone());
        }
    }

    let unknown = unknown_keys(&table);
    if !unknown.is_empty() {
        return Err(CliError::Config(format!("unknown keys: {}", unknown.join(", "))));
    }
    let file: FileConfig = Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| CliError::Config(e.message().to_string()))?;

    let cfg = match command {
        Command::RunSwe => RunConfig::Swe(file.swe.unwrap_or_default()),
        Command::RunBoussinesq => RunConfig::Boussinesq(file.boussinesq.unwrap_or_default()),
        Command::MakeSoliton => RunConfig::Soliton(file.soliton.unwrap_or_default()),
        Command::Validate => RunConfig::Validate(file.validate.unwrap_or_default()),
    };
    check(&cfg, command.section())?;
    Ok(cfg)
}

struct Problems {
    section: &'static str,
    missing: Vec<&'static str>,
    invalid: Vec<String>,
}

impl Problems {
    fn require<T>(&mut self, key: &'static str, v: &Option<T>) {
        if v.is_none() {
            self.missing.push(key);
        }
    }

    fn positive(&mut self, key: &str, v: f64) {
        if !(v > 0.0 && v.is_finite()) {
            self.invalid.push(format!("{}.{key} must be positive, got {v}", self.section));
        }
    }

    fn count(&mut self, key: &str, v: usize) {
        if v == 0 {
            self.invalid.push(format!("{}.{key} must be at least 1", self.section));
        }
    }

    fn courant(&mut self, v: f64) {
        if !(v > 0.0 && v <= 1.0) {
            self.invalid
                .push(format!("{}.courant must lie in (0, 1], got {v}", self.section));
        }
    }

    fn output(&mut self, times: &[f64], t_final: f64) {
        if let Some(t) = times.iter().find(|t| !(**t >= 0.0 && **t <= t_final)) {
            self.invalid.push(format!(
                "{}.snapshot_times entry {t} lies outside [0, {t_final}]",
                self.section
            ));
        }
    }

    fn finish(self) -> Result<()> {
        let mut msgs = Vec::new();
        if !self.missing.is_empty() {
            let keys: Vec<String> = self.missing.iter().map(|k| format!("{}.{k}", self.section)).collect();
            msgs.push(format!("missing keys: {}", keys.join(", ")));
        }
        msgs.extend(self.invalid);
        if msgs.is_empty() {
            Ok(())
        } else {
            Err(CliError::Config(msgs.join("; ")))
        }
    }
}

fn check(cfg: &RunConfig, section: &'static str) -> Result<()> {
    let mut p = Problems {
        section,
        missing: Vec::new(),
        invalid: Vec::new(),
    };
    match cfg {
        RunConfig::Swe(c) => {
            p.positive("g", c.g);
            p.positive("h0", c.h0);
            p.courant(c.courant);
            p.positive("length", c.length);
            p.count("n_x", c.n_x);
            p.positive("t_final", c.t_final);
            if c.amplitude != 0.0 {
                p.positive("period", c.period);
            }
            p.output(&c.snapshot_times, c.t_final);
        }
        RunConfig::Boussinesq(c) => {
            p.require("eps", &c.eps);
            p.require("mu", &c.mu);
            p.courant(c.courant);
            p.positive("length", c.length);
            p.count("n_x", c.n_x);
            p.positive("t_final", c.t_final);
            if c.boundary == Boundary::Generating {
                match c.forcing {
                    ForcingKind::Sine => p.positive("period", c.period),
                    ForcingKind::Trace => p.require("trace_file", &c.trace_file),
                    _ => {}
                }
            }
            if c.initial == Initial::Soliton || c.forcing == ForcingKind::Soliton {
                p.positive("zeta_max", c.zeta_max);
            }
            p.output(&c.snapshot_times, c.t_final);
        }
        RunConfig::Soliton(c) => {
            p.require("eps", &c.eps);
            p.require("mu", &c.mu);
            p.positive("zeta_max", c.zeta_max);
            p.positive("step", c.step);
            p.positive("spacing", c.spacing);
            if c.direction != 1.0 && c.direction != -1.0 {
                p.invalid
                    .push(format!("soliton.direction must be 1 or -1, got {}", c.direction));
            }
        }
        RunConfig::Validate(c) => {
            p.require("scenario", &c.scenario);
            p.require("eps", &c.eps);
            p.require("mu", &c.mu);
            if let Some(s) = &c.scenario {
                if let Err(e) = s.parse::<wavegen_core::ScenarioKind>() {
                    p.invalid.push(e.to_string());
                }
            }
            if let Some(v) = c.courant {
                p.courant(v);
            }
            if let Some(v) = c.t_final {
                p.positive("t_final", v);
            }
            if let Some(v) = c.reference_nx {
                p.count("reference_nx", v);
            }
            if let Some(list) = &c.coarse_nx {
                if list.is_empty() {
                    p.invalid.push("validate.coarse_nx is empty".into());
                }
                for n in list {
                    p.count("coarse_nx", *n);
                }
            }
        }
    }
    if let RunConfig::Boussinesq(BoussinesqConfig { eps: Some(e), .. })
    | RunConfig::Soliton(SolitonConfig { eps: Some(e), .. })
    | RunConfig::Validate(ValidateConfig { eps: Some(e), .. }) = cfg
    {
        p.positive("eps", *e);
    }
    if let RunConfig::Boussinesq(BoussinesqConfig { mu: Some(m), .. })
    | RunConfig::Soliton(SolitonConfig { mu: Some(m), .. })
    | RunConfig::Validate(ValidateConfig { mu: Some(m), .. }) = cfg
    {
        p.positive("mu", *m);
    }
    p.finish()
}
