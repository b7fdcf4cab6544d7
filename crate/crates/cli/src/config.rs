//! Run configuration: the TOML schema, preset expansion and default resolution.
//!
//! A document is parsed into a [`RawConfig`] where every field is optional.
//! Command-line overrides are another `RawConfig` merged on top, and a named
//! preset is merged underneath. [`resolve`] then applies defaults and checks
//! that each scenario has what it needs.

use std::path::PathBuf;

use biphoton::{Window, DEFAULT_TRUNCATION_TOL};
use clap::ValueEnum;
use serde::Deserialize;

use crate::error::CliError;

pub const DEFAULT_GATEWIDTH: f64 = 1.0;
pub const RECTANGULAR_GRID: (f64, usize) = (200.0, 16001);
pub const GAUSSIAN_GRID: (f64, usize) = (40.0, 8001);
pub const DEFAULT_OMEGA_M_MAX: f64 = 12.0;
pub const DEFAULT_SWEEP_SAMPLES: usize = 1201;
pub const DEFAULT_TAU_MAX: f64 = 16.0;
pub const DEFAULT_TAU_SAMPLES: usize = 1601;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Spectrum,
    Correlate,
    Sumrules,
    Measure,
    FigurePreset,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Spectrum => "spectrum",
            Scenario::Correlate => "correlate",
            Scenario::Sumrules => "sumrules",
            Scenario::Measure => "measure",
            Scenario::FigurePreset => "figure-preset",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
    Fig6a,
    Fig6b,
}

impl Preset {
    pub const ALL: [Preset; 8] = [
        Preset::Fig2a,
        Preset::Fig2b,
        Preset::Fig3a,
        Preset::Fig3b,
        Preset::Fig4a,
        Preset::Fig4b,
        Preset::Fig6a,
        Preset::Fig6b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig3a => "fig3a",
            Preset::Fig3b => "fig3b",
            Preset::Fig4a => "fig4a",
            Preset::Fig4b => "fig4b",
            Preset::Fig6a => "fig6a",
            Preset::Fig6b => "fig6b",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, ValueEnum)]
pub enum Format {
    #[default]
    #[serde(rename = "csv")]
    #[value(name = "csv")]
    Csv,
    #[serde(rename = "csv+svg")]
    #[value(name = "csv+svg")]
    CsvSvg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Rectangular,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModulatorKind {
    Identity,
    Phase,
    Amplitude,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    None,
    Hann,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawModel {
    pub kind: Option<ModelKind>,
    pub center: Option<f64>,
    pub duration: Option<f64>,
    pub delay: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGrid {
    pub half_width: Option<f64>,
    pub n_points: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawModulator {
    pub kind: Option<ModulatorKind>,
    pub depth: Option<f64>,
    pub omega_m: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSweep {
    pub omega_m_max: Option<f64>,
    pub n_samples: Option<usize>,
    pub tau_max: Option<f64>,
    pub n_tau: Option<usize>,
    pub window: Option<WindowKind>,
}

/// A configuration document as written, before defaults.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub scenario: Option<Scenario>,
    pub preset: Option<Preset>,
    pub gatewidth: Option<f64>,
    pub tol: Option<f64>,
    pub output: Option<String>,
    pub format: Option<Format>,
    pub model: Option<RawModel>,
    pub grid: Option<RawGrid>,
    pub signal: Option<RawModulator>,
    pub idler: Option<RawModulator>,
    pub delta_grid: Option<RawGrid>,
    pub sweep: Option<RawSweep>,
}

fn pick<T>(over: Option<T>, base: Option<T>) -> Option<T> {
    over.or(base)
}

fn merge_section<T>(base: Option<T>, over: Option<T>, f: impl FnOnce(T, T) -> T) -> Option<T> {
    match (base, over) {
        (Some(b), Some(o)) => Some(f(b, o)),
        (b, o) => o.or(b),
    }
}

impl RawModel {
    fn merge(self, over: RawModel) -> RawModel {
        if over.kind.is_some() && over.kind != self.kind {
            return over;
        }
        RawModel {
            kind: pick(over.kind, self.kind),
            center: pick(over.center, self.center),
            duration: pick(over.duration, self.duration),
            delay: pick(over.delay, self.delay),
        }
    }
}

impl RawGrid {
    fn merge(self, over: RawGrid) -> RawGrid {
        RawGrid {
            half_width: pick(over.half_width, self.half_width),
            n_points: pick(over.n_points, self.n_points),
        }
    }
}

impl RawModulator {
    fn merge(self, over: RawModulator) -> RawModulator {
        if over.kind.is_some() && over.kind != self.kind {
            return over;
        }
        RawModulator {
            kind: pick(over.kind, self.kind),
            depth: pick(over.depth, self.depth),
            omega_m: pick(over.omega_m, self.omega_m),
        }
    }
}

impl RawSweep {
    fn merge(self, over: RawSweep) -> RawSweep {
        RawSweep {
            omega_m_max: pick(over.omega_m_max, self.omega_m_max),
            n_samples: pick(over.n_samples, self.n_samples),
            tau_max: pick(over.tau_max, self.tau_max),
            n_tau: pick(over.n_tau, self.n_tau),
            window: pick(over.window, self.window),
        }
    }
}

impl RawConfig {
    /// Fields set in `over` win; sections merge field by field, except that a
    /// model or modulator whose `kind` changes is replaced whole.
    pub fn merge(self, over: RawConfig) -> RawConfig {
        RawConfig {
            scenario: pick(over.scenario, self.scenario),
            preset: pick(over.preset, self.preset),
            gatewidth: pick(over.gatewidth, self.gatewidth),
            tol: pick(over.tol, self.tol),
            output: pick(over.output, self.output),
            format: pick(over.format, self.format),
            model: merge_section(self.model, over.model, RawModel::merge),
            grid: merge_section(self.grid, over.grid, RawGrid::merge),
            signal: merge_section(self.signal, over.signal, RawModulator::merge),
            idler: merge_section(self.idler, over.idler, RawModulator::merge),
            delta_grid: merge_section(self.delta_grid, over.delta_grid, RawGrid::merge),
            sweep: merge_section(self.sweep, over.sweep, RawSweep::merge),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelConfig {
    Rectangular { center: f64 },
    Gaussian { duration: f64, delay: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub half_width: f64,
    pub n_points: usize,
}

/// A modulator after resolution. The amplitude frequency is absent only in
/// the measure scenario, where it is swept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModulatorConfig {
    Identity,
    Phase { depth: f64, omega_m: f64 },
    Amplitude { depth: f64, omega_m: Option<f64> },
}

impl ModulatorConfig {
    pub fn omega_m(&self) -> Option<f64> {
        match *self {
            ModulatorConfig::Identity => None,
            ModulatorConfig::Phase { omega_m, .. } => Some(omega_m),
            ModulatorConfig::Amplitude { omega_m, .. } => omega_m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub omega_m_max: f64,
    pub n_samples: usize,
    pub tau_max: f64,
    pub n_tau: usize,
    pub window: Window,
}

/// Fully resolved run: defaults applied, scenario requirements checked.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Never `FigurePreset`; a preset resolves to the scenario it stands for.
    pub scenario: Scenario,
    pub preset: Option<Preset>,
    pub model: ModelConfig,
    pub grid: GridConfig,
    pub signal: ModulatorConfig,
    pub idler: ModulatorConfig,
    pub gatewidth: f64,
    pub tol: f64,
    pub delta_grid: Option<GridConfig>,
    pub sweep: SweepConfig,
    pub output: PathBuf,
    pub format: Format,
}

/// Parses a TOML document into a [`RawConfig`], naming the offending path on failure.
pub fn parse_raw(text: &str) -> Result<RawConfig, CliError> {
    let de = toml::de::Deserializer::parse(text).map_err(|e| CliError::Config(e.to_string()))?;
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let msg = inner.message().to_string();
        if path.is_empty() || path == "." {
            CliError::Config(msg)
        } else {
            CliError::Config(format!("{path}: {msg}"))
        }
    })
}

/// Parses and resolves a document with no command-line overrides.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    resolve(parse_raw(text)?)
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn resolve_model(raw: Option<RawModel>) -> Result<ModelConfig, CliError> {
    let raw = raw.unwrap_or_default();
    match raw.kind.unwrap_or(ModelKind::Rectangular) {
        ModelKind::Rectangular => {
            if raw.duration.is_some() || raw.delay.is_some() {
                return Err(config_err(
                    "model: duration and delay apply only to kind = \"gaussian\"",
                ));
            }
            Ok(ModelConfig::Rectangular {
                center: raw.center.unwrap_or(0.0),
            })
        }
        ModelKind::Gaussian => {
            if raw.center.is_some() {
                return Err(config_err(
                    "model: center applies only to kind = \"rectangular\"",
                ));
            }
            let duration = raw
                .duration
                .ok_or_else(|| config_err("model: gaussian requires duration"))?;
            Ok(ModelConfig::Gaussian {
                duration,
                delay: raw.delay.unwrap_or(0.0),
            })
        }
    }
}

fn resolve_grid(raw: Option<RawGrid>, default: (f64, usize)) -> GridConfig {
    let raw = raw.unwrap_or_default();
    GridConfig {
        half_width: raw.half_width.unwrap_or(default.0),
        n_points: raw.n_points.unwrap_or(default.1),
    }
}

fn resolve_modulator(
    raw: Option<RawModulator>,
    channel: &str,
    swept: bool,
) -> Result<ModulatorConfig, CliError> {
    // a section carrying only omega_m (a shared-frequency override) leaves the channel unmodulated
    let Some(raw) = raw.filter(|r| r.kind.is_some() || r.depth.is_some()) else {
        return Ok(ModulatorConfig::Identity);
    };
    let kind = raw
        .kind
        .ok_or_else(|| config_err(format!("{channel}: kind required")))?;
    let depth = || {
        raw.depth
            .ok_or_else(|| config_err(format!("{channel}: depth required")))
    };
    let omega_m = || {
        raw.omega_m
            .ok_or_else(|| config_err(format!("{channel}: omega_m required")))
    };
    match kind {
        ModulatorKind::Identity => {
            if raw.depth.is_some() {
                return Err(config_err(format!("{channel}: identity takes no depth")));
            }
            Ok(ModulatorConfig::Identity)
        }
        ModulatorKind::Phase => Ok(ModulatorConfig::Phase {
            depth: depth()?,
            omega_m: omega_m()?,
        }),
        ModulatorKind::Amplitude if swept => {
            if raw.omega_m.is_some() {
                return Err(config_err(format!(
                    "{channel}: omega_m is swept in the measure scenario; set [sweep] omega_m_max instead"
                )));
            }
            Ok(ModulatorConfig::Amplitude {
                depth: depth()?,
                omega_m: None,
            })
        }
        ModulatorKind::Amplitude => Ok(ModulatorConfig::Amplitude {
            depth: depth()?,
            omega_m: Some(omega_m()?),
        }),
    }
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(config_err(format!("{name} must be positive, got {v}")))
    }
}

fn check_grid(name: &str, g: &GridConfig) -> Result<(), CliError> {
    positive(&format!("{name}.half_width"), g.half_width)?;
    if g.n_points < 3 || g.n_points.is_multiple_of(2) {
        return Err(config_err(format!(
            "{name}.n_points must be odd and at least 3, got {}",
            g.n_points
        )));
    }
    Ok(())
}

/// Expands any preset, applies defaults and validates the result.
pub fn resolve(raw: RawConfig) -> Result<RunConfig, CliError> {
    let raw = match raw.preset {
        Some(p) => {
            if !matches!(raw.scenario, None | Some(Scenario::FigurePreset)) {
                return Err(config_err(format!(
                    "preset {} requires scenario figure-preset",
                    p.name()
                )));
            }
            crate::presets::preset(p).merge(RawConfig {
                scenario: None,
                ..raw
            })
        }
        None => raw,
    };
    let scenario = match raw.scenario {
        None => return Err(config_err("scenario required")),
        Some(Scenario::FigurePreset) => {
            return Err(config_err("scenario figure-preset requires a preset"))
        }
        Some(s) => s,
    };

    let gatewidth = positive("gatewidth", raw.gatewidth.unwrap_or(DEFAULT_GATEWIDTH))?;
    let tol = raw.tol.unwrap_or(DEFAULT_TRUNCATION_TOL);
    if !(tol > 0.0 && tol < 1.0) {
        return Err(config_err(format!("tol must lie in (0, 1), got {tol}")));
    }

    let model = resolve_model(raw.model)?;
    let default_grid = match model {
        ModelConfig::Rectangular { .. } => RECTANGULAR_GRID,
        ModelConfig::Gaussian { .. } => GAUSSIAN_GRID,
    };
    let grid = resolve_grid(raw.grid, default_grid);
    check_grid("grid", &grid)?;
    let delta_grid = raw
        .delta_grid
        .map(|g| resolve_grid(Some(g), RECTANGULAR_GRID));
    if let Some(g) = &delta_grid {
        check_grid("delta_grid", g)?;
    }

    let swept = scenario == Scenario::Measure;
    let signal = resolve_modulator(raw.signal, "signal", swept)?;
    let idler = resolve_modulator(raw.idler, "idler", swept)?;
    if swept {
        for (name, m) in [("signal", &signal), ("idler", &idler)] {
            if !matches!(m, ModulatorConfig::Amplitude { .. }) {
                return Err(config_err(format!(
                    "measure requires an amplitude modulator in [{name}]"
                )));
            }
        }
    }

    let sweep_raw = raw.sweep.unwrap_or_default();
    let sweep = SweepConfig {
        omega_m_max: sweep_raw.omega_m_max.unwrap_or(DEFAULT_OMEGA_M_MAX),
        n_samples: sweep_raw.n_samples.unwrap_or(DEFAULT_SWEEP_SAMPLES),
        tau_max: sweep_raw.tau_max.unwrap_or(DEFAULT_TAU_MAX),
        n_tau: sweep_raw.n_tau.unwrap_or(DEFAULT_TAU_SAMPLES),
        window: match sweep_raw.window {
            Some(WindowKind::Hann) => Window::Hann,
            _ => Window::None,
        },
    };

    let stem = raw
        .preset
        .map(Preset::name)
        .unwrap_or_else(|| scenario.name());
    let output = PathBuf::from(raw.output.unwrap_or_else(|| stem.to_string()));

    Ok(RunConfig {
        scenario,
        preset: raw.preset,
        model,
        grid,
        signal,
        idler,
        gatewidth,
        tol,
        delta_grid,
        sweep,
        output,
        format: raw.format.unwrap_or_default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_needs_scenario() {
        let err = parse_config("").unwrap_err();
        assert_eq!(err, CliError::Config("scenario required".into()));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn minimal_spectrum_gets_defaults() {
        let c = parse_config("scenario = \"spectrum\"").unwrap();
        assert_eq!(c.scenario, Scenario::Spectrum);
        assert_eq!(c.gatewidth, 1.0);
        assert_eq!(c.tol, 1e-10);
        assert_eq!(c.model, ModelConfig::Rectangular { center: 0.0 });
        assert_eq!(
            c.grid,
            GridConfig {
                half_width: 200.0,
                n_points: 16001
            }
        );
        assert_eq!(c.signal, ModulatorConfig::Identity);
        assert_eq!(c.format, Format::Csv);
        assert_eq!(c.output, PathBuf::from("spectrum"));
    }

    #[test]
    fn gaussian_default_grid() {
        let c = parse_config(
            "scenario = \"spectrum\"\n[model]\nkind = \"gaussian\"\nduration = 1\ndelay = 8\n",
        )
        .unwrap();
        assert_eq!(
            c.grid,
            GridConfig {
                half_width: 40.0,
                n_points: 8001
            }
        );
        assert_eq!(
            c.model,
            ModelConfig::Gaussian {
                duration: 1.0,
                delay: 8.0
            }
        );
    }

    #[test]
    fn unknown_keys_are_named() {
        let err = parse_config("scenario = \"spectrum\"\nbogus = 1\n").unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
        let err = parse_config("scenario = \"spectrum\"\n[signal]\nkind = \"phase\"\ndepht = 2\n")
            .unwrap_err();
        assert!(err.to_string().contains("depht"), "{err}");
    }

    #[test]
    fn type_mismatch_reports_path() {
        let err =
            parse_config("scenario = \"spectrum\"\n[grid]\nn_points = \"many\"\n").unwrap_err();
        assert!(err.to_string().starts_with("grid.n_points"), "{err}");
        let err = parse_config("scenario = \"sideways\"").unwrap_err();
        assert!(err.to_string().starts_with("scenario"), "{err}");
    }

    #[test]
    fn fig6b_expands_to_measurement() {
        let c = parse_config("preset = \"fig6b\"").unwrap();
        assert_eq!(c.scenario, Scenario::Measure);
        assert_eq!(c.preset, Some(Preset::Fig6b));
        assert_eq!(
            c.model,
            ModelConfig::Gaussian {
                duration: 1.0,
                delay: 8.0
            }
        );
        assert_eq!(
            c.signal,
            ModulatorConfig::Amplitude {
                depth: 0.2,
                omega_m: None
            }
        );
        assert_eq!(
            c.idler,
            ModulatorConfig::Amplitude {
                depth: 0.2,
                omega_m: None
            }
        );
        assert_eq!(c.sweep.omega_m_max, 12.0);
        assert_eq!(c.output, PathBuf::from("fig6b"));
    }

    #[test]
    fn preset_fields_can_be_overridden() {
        let c = parse_config(
            "scenario = \"figure-preset\"\npreset = \"fig3a\"\n[signal]\nomega_m = 0.03\n[idler]\nomega_m = 0.03\n",
        )
        .unwrap();
        assert_eq!(c.scenario, Scenario::Correlate);
        assert_eq!(
            c.signal,
            ModulatorConfig::Phase {
                depth: 2.0,
                omega_m: 0.03
            }
        );
    }

    #[test]
    fn preset_with_other_scenario_is_rejected() {
        assert!(parse_config("scenario = \"spectrum\"\npreset = \"fig2a\"").is_err());
        assert!(parse_config("scenario = \"figure-preset\"").is_err());
    }

    #[test]
    fn grid_must_be_odd() {
        let err = parse_config("scenario = \"spectrum\"\n[grid]\nn_points = 100\n").unwrap_err();
        assert!(err.to_string().contains("odd"));
    }

    #[test]
    fn modulator_fields_follow_kind() {
        assert!(
            parse_config("scenario = \"spectrum\"\n[signal]\nkind = \"phase\"\ndepth = 2\n")
                .is_err()
        );
        assert!(parse_config(
            "scenario = \"spectrum\"\n[signal]\nkind = \"identity\"\ndepth = 2\n"
        )
        .is_err());
        assert!(parse_config(
            "scenario = \"measure\"\n[signal]\nkind = \"amplitude\"\ndepth = 0.2\n"
        )
        .is_err());
        let err = parse_config(
            "scenario = \"measure\"\n[signal]\nkind = \"amplitude\"\ndepth = 0.2\nomega_m = 3\n[idler]\nkind = \"amplitude\"\ndepth = 0.2\n",
        )
        .unwrap_err();
        assert!(err.to_string().contains("swept"));
        assert!(
            parse_config("scenario = \"spectrum\"\n[model]\ncenter = 1\nduration = 2\n").is_err()
        );
    }

    #[test]
    fn kind_change_replaces_section() {
        let base = parse_raw("[signal]\nkind = \"phase\"\ndepth = 2\nomega_m = 1\n").unwrap();
        let over = parse_raw("[signal]\nkind = \"identity\"\n").unwrap();
        let merged = base.merge(over);
        assert_eq!(merged.signal.unwrap().depth, None);
    }
}
