//! Command-line front end for the biphoton modulation simulator: TOML
//! configuration, figure presets, and CSV/SVG output.

pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod run;

pub use config::{parse_config, parse_raw, resolve, Preset, RawConfig, RunConfig, Scenario};
pub use error::CliError;
pub use run::{run, RunReport};
