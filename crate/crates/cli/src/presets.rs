//! Scenario presets reproducing the figure datasets.
//!
//! Markovian presets (all λ = 15) sample γ₀t ∈ [0, 20] with 2001 points;
//! anything involving λ = 0.5 samples [0, 30] with 3001 points to resolve
//! the oscillations.

use crate::config::{ReservoirParams, ScenarioConfig, ScenarioKind, SeriesConfig, TimeGrid};
use crate::error::{CliError, Result};

pub const PRESET_NAMES: [&str; 14] =
    ["fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig3c", "fig3d", "fig4a", "fig4b", "fig5", "fig6a", "fig6b", "fig7"];

const MARKOVIAN: f64 = 15.0;
const NON_MARKOVIAN: f64 = 0.5;
const DETUNING: f64 = 2.0;
const SPECTATOR_COUNTS: [usize; 4] = [1, 2, 3, 6];

fn grid_for(lambdas: impl IntoIterator<Item = f64>) -> TimeGrid {
    if lambdas.into_iter().all(|l| l == MARKOVIAN) {
        TimeGrid { t_max: 20.0, samples: 2001 }
    } else {
        TimeGrid { t_max: 30.0, samples: 3001 }
    }
}

fn equal_amplitudes(count: usize) -> Vec<[f64; 2]> {
    vec![[1.0 / (count as f64).sqrt(), 0.0]; count]
}

/// One series per N ∈ {1, 2, 3, 6}, every subsystem with the same reservoir.
fn spectator_scan(kind: ScenarioKind, lambda: f64, delta: f64) -> ScenarioConfig {
    let series = SPECTATOR_COUNTS
        .iter()
        .map(|&n| SeriesConfig {
            label: format!("N={n}"),
            subsystems: vec![ReservoirParams::new(n, lambda, delta); kind.subsystem_count()],
        })
        .collect();
    let amplitudes = match kind {
        ScenarioKind::DecayRate => Vec::new(),
        ScenarioKind::Coherence => equal_amplitudes(2),
        other => equal_amplitudes(other.subsystem_count()),
    };
    ScenarioConfig { kind, amplitudes, grid: grid_for([lambda]), series, output: None }
}

/// One series per regime combination (M: λ = 15, N: λ = 0.5), N = 6 everywhere.
fn regime_mix(kind: ScenarioKind, combos: &[&str]) -> ScenarioConfig {
    let series = combos
        .iter()
        .map(|combo| SeriesConfig {
            label: combo.to_string(),
            subsystems: combo
                .chars()
                .map(|r| ReservoirParams::new(6, if r == 'M' { MARKOVIAN } else { NON_MARKOVIAN }, DETUNING))
                .collect(),
        })
        .collect();
    let amplitudes = equal_amplitudes(kind.subsystem_count());
    ScenarioConfig { kind, amplitudes, grid: grid_for([NON_MARKOVIAN]), series, output: None }
}

pub fn preset(name: &str) -> Result<ScenarioConfig> {
    use ScenarioKind::*;
    let config = match name {
        "fig2a" => spectator_scan(Coherence, MARKOVIAN, 0.0),
        "fig2b" => spectator_scan(Coherence, MARKOVIAN, DETUNING),
        "fig2c" => spectator_scan(Coherence, NON_MARKOVIAN, 0.0),
        "fig2d" => spectator_scan(Coherence, NON_MARKOVIAN, DETUNING),
        "fig3a" => spectator_scan(DecayRate, MARKOVIAN, 0.0),
        "fig3b" => spectator_scan(DecayRate, MARKOVIAN, DETUNING),
        "fig3c" => spectator_scan(DecayRate, NON_MARKOVIAN, 0.0),
        "fig3d" => spectator_scan(DecayRate, NON_MARKOVIAN, DETUNING),
        "fig4a" => spectator_scan(Concurrence, MARKOVIAN, DETUNING),
        "fig4b" => spectator_scan(Concurrence, NON_MARKOVIAN, DETUNING),
        "fig5" => regime_mix(Concurrence, &["MM", "MN", "NN"]),
        "fig6a" => spectator_scan(Lbc, MARKOVIAN, DETUNING),
        "fig6b" => spectator_scan(Lbc, NON_MARKOVIAN, DETUNING),
        "fig7" => regime_mix(Lbc, &["MMM", "MMN", "MNN", "NNN"]),
        other => return Err(CliError::UnknownPreset(other.to_string())),
    };
    Ok(config)
}
