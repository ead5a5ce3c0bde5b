use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qreservoir_cli::{preset, run_scenario, run_verify, CliError, Fault, ScenarioConfig, ScenarioKind, VerifyOptions, PRESET_NAMES};

/// Exact dynamics of qubits in Lorentzian reservoirs with spectator qubits.
///
/// Log verbosity follows RUST_LOG (e.g. RUST_LOG=info).
#[derive(Parser)]
#[command(name = "qreservoir", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML); flags below override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write CSV here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// End of the time grid in units of 1/γ₀.
    #[arg(long, global = true)]
    t_max: Option<f64>,
    /// Number of time samples.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Randomization seed for `verify`.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// l1 coherence of a single qubit (defaults to fig2a).
    Coherence,
    /// Time-local decay rate Γ(t) (defaults to fig3a).
    DecayRate,
    /// Two-qubit concurrence of the EPR-type state (defaults to fig4a).
    Concurrence,
    /// Three-qubit lower bound of concurrence of the W-type state (defaults to fig6a).
    Lbc,
    /// Dataset of a figure preset.
    Figures {
        /// Preset name, e.g. fig2a.
        preset: Option<String>,
        /// List the preset names.
        #[arg(long)]
        list: bool,
        /// Print the preset's scenario file instead of running it.
        #[arg(long)]
        print_config: bool,
    },
    /// Randomized cross-checks of closed forms, oracles and measures.
    Verify {
        /// Samples per property.
        #[arg(long, default_value_t = 100)]
        budget: usize,
        /// Flip the sign of G(t) in the oracle comparison (harness self-test).
        #[arg(long)]
        inject_fault: bool,
    },
}

fn scenario_for(kind: ScenarioKind, default_preset: &str, common: &Common) -> Result<ScenarioConfig, CliError> {
    let config = match &common.config {
        Some(path) => {
            let config = ScenarioConfig::load(path)?;
            if config.kind != kind {
                return Err(CliError::config(
                    "kind",
                    format!("file describes `{}`, command expects `{}`", config.kind.name(), kind.name()),
                ));
            }
            config
        }
        None => preset(default_preset)?,
    };
    Ok(config)
}

fn apply_overrides(mut config: ScenarioConfig, common: &Common) -> Result<ScenarioConfig, CliError> {
    if let Some(t_max) = common.t_max {
        config.grid.t_max = t_max;
    }
    if let Some(samples) = common.samples {
        config.grid.samples = samples;
    }
    if let Some(out) = &common.out {
        config.output = Some(out.clone());
    }
    config.validate()?;
    Ok(config)
}

fn emit_csv(config: &ScenarioConfig) -> Result<(), CliError> {
    let data = run_scenario(config)?;
    match &config.output {
        Some(path) => {
            let io_err = |source| CliError::Io { path: path.clone(), source };
            let mut file = BufWriter::new(File::create(path).map_err(io_err)?);
            data.write_csv(&mut file).map_err(io_err)?;
            file.flush().map_err(io_err)?;
            log::info!("wrote {} rows to {}", data.times.len(), path.display());
        }
        None => {
            let stdout = io::stdout();
            data.write_csv(stdout.lock()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let common = &cli.common;
    let kind_default = match &cli.command {
        Command::Coherence => Some((ScenarioKind::Coherence, "fig2a")),
        Command::DecayRate => Some((ScenarioKind::DecayRate, "fig3a")),
        Command::Concurrence => Some((ScenarioKind::Concurrence, "fig4a")),
        Command::Lbc => Some((ScenarioKind::Lbc, "fig6a")),
        _ => None,
    };
    if let Some((kind, default_preset)) = kind_default {
        let config = apply_overrides(scenario_for(kind, default_preset, common)?, common)?;
        emit_csv(&config)?;
        return Ok(ExitCode::SUCCESS);
    }

    match cli.command {
        Command::Figures { list: true, .. } => {
            for name in PRESET_NAMES {
                println!("{name}");
            }
        }
        Command::Figures { preset: Some(name), print_config, .. } => {
            let config = apply_overrides(preset(&name)?, common)?;
            if print_config {
                print!("{}", config.to_toml()?);
            } else {
                emit_csv(&config)?;
            }
        }
        Command::Figures { preset: None, .. } => {
            return Err(CliError::config("preset", "name a preset or pass --list"));
        }
        Command::Verify { budget, inject_fault } => {
            let fault = inject_fault.then_some(Fault::FlipSurvivalSign);
            let report = run_verify(&VerifyOptions { seed: common.seed, budget, fault })?;
            print!("{}", report.to_text());
            if !report.passed() {
                return Ok(ExitCode::from(1));
            }
        }
        _ => unreachable!("scenario commands handled above"),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
