//! Scenario configuration and its TOML schema.
//!
//! ```toml
//! kind = "concurrence"            # coherence | decay_rate | concurrence | lbc
//! amplitudes = [[0.7071067811865476, 0.0], [0.7071067811865476, 0.0]]
//!
//! [grid]
//! t_max = 20.0                     # in units of 1/γ₀
//! samples = 2001
//!
//! [[series]]
//! label = "N=1"
//! subsystems = [{ n_qubits = 1, lambda = 15.0, delta = 2.0 }, { n_qubits = 1, lambda = 15.0, delta = 2.0 }]
//! ```
//!
//! `amplitudes` are `[re, im]` pairs: (C₀, C_j(0)) for coherence,
//! (C^A, C^B) for concurrence and (C^A, C^B, C^C) for lbc; decay_rate
//! takes none. Every series lists one reservoir per subsystem: one for
//! coherence and decay_rate, two for concurrence, three for lbc.

use std::path::{Path, PathBuf};

use qreservoir::maps::{Label, SubsystemSpec};
use qreservoir::model::ReservoirSpec;
use qreservoir::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Coherence,
    DecayRate,
    Concurrence,
    Lbc,
}

impl ScenarioKind {
    pub fn subsystem_count(self) -> usize {
        match self {
            ScenarioKind::Coherence | ScenarioKind::DecayRate => 1,
            ScenarioKind::Concurrence => 2,
            ScenarioKind::Lbc => 3,
        }
    }

    pub fn amplitude_count(self) -> usize {
        match self {
            ScenarioKind::Coherence | ScenarioKind::Concurrence => 2,
            ScenarioKind::DecayRate => 0,
            ScenarioKind::Lbc => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Coherence => "coherence",
            ScenarioKind::DecayRate => "decay_rate",
            ScenarioKind::Concurrence => "concurrence",
            ScenarioKind::Lbc => "lbc",
        }
    }
}

fn default_gamma0() -> f64 {
    1.0
}

fn is_unit(x: &f64) -> bool {
    *x == 1.0
}

/// Reservoir of one subsystem; rates in units of γ₀.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReservoirParams {
    pub n_qubits: usize,
    pub lambda: f64,
    pub delta: f64,
    #[serde(default = "default_gamma0", skip_serializing_if = "is_unit")]
    pub gamma0: f64,
}

impl ReservoirParams {
    pub fn new(n_qubits: usize, lambda: f64, delta: f64) -> Self {
        Self { n_qubits, lambda, delta, gamma0: 1.0 }
    }

    pub fn to_spec(&self) -> qreservoir::Result<ReservoirSpec> {
        ReservoirSpec::new(self.gamma0, self.lambda, self.delta, self.n_qubits)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesConfig {
    pub label: String,
    pub subsystems: Vec<ReservoirParams>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub t_max: f64,
    pub samples: usize,
}

impl TimeGrid {
    /// Uniform samples on [0, t_max]; a single sample is t = 0.
    pub fn times(&self) -> Vec<f64> {
        if self.samples == 1 {
            return vec![0.0];
        }
        let last = (self.samples - 1) as f64;
        (0..self.samples).map(|k| self.t_max * (k as f64 / last)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    #[serde(default)]
    pub amplitudes: Vec<[f64; 2]>,
    pub grid: TimeGrid,
    pub series: Vec<SeriesConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

const LABELS: [Label; 3] = [Label::A, Label::B, Label::C];

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        Self::from_toml(&text)
    }

    pub fn amplitudes_complex(&self) -> Vec<Complex64> {
        self.amplitudes.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
    }

    /// Checks the grid, the amplitudes and every reservoir, naming the
    /// offending field on failure.
    pub fn validate(&self) -> Result<()> {
        let grid = &self.grid;
        if grid.samples == 0 {
            return Err(CliError::config("grid.samples", "at least one sample is required"));
        }
        if !grid.t_max.is_finite() || grid.t_max < 0.0 {
            return Err(CliError::config("grid.t_max", format!("must be finite and non-negative, got {}", grid.t_max)));
        }
        if grid.samples > 1 && grid.t_max <= 0.0 {
            return Err(CliError::config("grid.t_max", "must be positive when more than one sample is requested"));
        }

        let expected = self.kind.amplitude_count();
        if self.amplitudes.len() != expected {
            return Err(CliError::config(
                "amplitudes",
                format!("{} needs {expected} amplitude pairs, got {}", self.kind.name(), self.amplitudes.len()),
            ));
        }
        if expected > 0 {
            let norm_sqr: f64 = self.amplitudes_complex().iter().map(|z| z.norm_sqr()).sum();
            if (norm_sqr - 1.0).abs() > 1e-10 {
                return Err(CliError::config("amplitudes", format!("squared norm is {norm_sqr}, expected 1")));
            }
        }

        if self.series.is_empty() {
            return Err(CliError::config("series", "at least one series is required"));
        }
        for (i, series) in self.series.iter().enumerate() {
            if series.label.is_empty() || series.label.contains([',', '\n', '"']) {
                return Err(CliError::config(format!("series[{i}].label"), "must be non-empty without commas, quotes or newlines"));
            }
            if series.subsystems.len() != self.kind.subsystem_count() {
                return Err(CliError::config(
                    format!("series[{i}].subsystems"),
                    format!("{} needs {} subsystems, got {}", self.kind.name(), self.kind.subsystem_count(), series.subsystems.len()),
                ));
            }
            for (k, params) in series.subsystems.iter().enumerate() {
                params.to_spec().map_err(|e| CliError::config(format!("series[{i}].subsystems[{k}]"), e.to_string()))?;
            }
        }
        Ok(())
    }

    /// Subsystems of one series with the scenario's initial amplitudes
    /// (zero amplitude for kinds that take none).
    pub fn subsystems(&self, series: &SeriesConfig) -> Result<Vec<SubsystemSpec>> {
        let amps = self.amplitudes_complex();
        series
            .subsystems
            .iter()
            .enumerate()
            .map(|(k, params)| {
                // coherence keeps (C₀, C_j(0)); the active qubit carries the second
                let c0 = match self.kind {
                    ScenarioKind::Coherence => amps[1],
                    ScenarioKind::DecayRate => Complex64::new(1.0, 0.0),
                    _ => amps[k],
                };
                Ok(SubsystemSpec::new(LABELS[k], params.to_spec()?, c0)?)
            })
            .collect()
    }
}
