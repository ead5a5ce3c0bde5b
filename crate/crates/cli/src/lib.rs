//! Scenario configuration, figure presets, CSV datasets and the
//! verification runner behind the `qreservoir` binary.

pub mod config;
pub mod error;
pub mod presets;
pub mod scenario;
pub mod verify;

pub use config::{ReservoirParams, ScenarioConfig, ScenarioKind, SeriesConfig, TimeGrid};
pub use error::{CliError, Result};
pub use presets::{preset, PRESET_NAMES};
pub use scenario::{run_scenario, Dataset};
pub use verify::{run_verify, Fault, VerifyOptions, VerifyReport};
