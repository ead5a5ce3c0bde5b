//! Scenario evaluation and CSV output.

use std::io::Write;

use qreservoir::entanglement::{concurrence_epr, lbc_w};
use qreservoir::maps::{coherence_l1, single_qubit_state};
use qreservoir::model::decay_rate;
use qreservoir::Error;

use crate::config::{ScenarioConfig, ScenarioKind};
use crate::error::Result;

/// One column per series, one row per time sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub header: Vec<String>,
    pub times: Vec<f64>,
    /// `columns[s][k]` is series `s` at `times[k]`.
    pub columns: Vec<Vec<f64>>,
}

/// Fixed 17-significant-digit scientific notation; `nan` marks undefined values.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.16e}")
    }
}

impl Dataset {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", self.header.join(","))?;
        for (k, t) in self.times.iter().enumerate() {
            let mut line = format_value(*t);
            for column in &self.columns {
                line.push(',');
                line.push_str(&format_value(column[k]));
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<Dataset> {
    config.validate()?;
    let times = config.grid.times();
    let amps = config.amplitudes_complex();
    let mut header = vec!["t_gamma0".to_string()];
    let mut columns = Vec::with_capacity(config.series.len());
    for series in &config.series {
        header.push(series.label.clone());
        let subs = config.subsystems(series)?;
        let column = times
            .iter()
            .map(|&t| -> Result<f64> {
                Ok(match config.kind {
                    ScenarioKind::Coherence => coherence_l1(&single_qubit_state(t, amps[0], amps[1], &subs[0].reservoir)?),
                    ScenarioKind::DecayRate => match decay_rate(t, &subs[0].reservoir) {
                        Err(Error::DecayRatePole { t, g_abs }) => {
                            log::warn!("series {}: decay rate undefined at t = {t} (|G| = {g_abs:e})", series.label);
                            f64::NAN
                        }
                        other => other?,
                    },
                    ScenarioKind::Concurrence => concurrence_epr(t, &subs[0], &subs[1])?,
                    ScenarioKind::Lbc => lbc_w(t, &subs[0], &subs[1], &subs[2])?,
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        columns.push(column);
    }
    Ok(Dataset { header, times, columns })
}
