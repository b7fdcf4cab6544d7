//! Named parameter sets behind the figure-preset scenario.

use crate::config::{
    ModelKind, ModulatorKind, Preset, RawConfig, RawModel, RawModulator, RawSweep, Scenario,
};

fn phase(depth: f64, omega_m: f64) -> Option<RawModulator> {
    Some(RawModulator {
        kind: Some(ModulatorKind::Phase),
        depth: Some(depth),
        omega_m: Some(omega_m),
    })
}

fn rectangular() -> Option<RawModel> {
    Some(RawModel {
        kind: Some(ModelKind::Rectangular),
        center: Some(0.0),
        ..RawModel::default()
    })
}

fn spectrum(omega_m: f64) -> RawConfig {
    RawConfig {
        scenario: Some(Scenario::Spectrum),
        model: rectangular(),
        signal: phase(2.0, omega_m),
        idler: Some(RawModulator {
            kind: Some(ModulatorKind::Identity),
            ..RawModulator::default()
        }),
        ..RawConfig::default()
    }
}

fn comb(delta_i: f64, omega_m: f64) -> RawConfig {
    RawConfig {
        scenario: Some(Scenario::Correlate),
        model: rectangular(),
        signal: phase(2.0, omega_m),
        idler: phase(delta_i, omega_m),
        ..RawConfig::default()
    }
}

fn measurement() -> RawConfig {
    let amplitude = Some(RawModulator {
        kind: Some(ModulatorKind::Amplitude),
        depth: Some(0.2),
        omega_m: None,
    });
    RawConfig {
        scenario: Some(Scenario::Measure),
        model: Some(RawModel {
            kind: Some(ModelKind::Gaussian),
            duration: Some(1.0),
            delay: Some(8.0),
            ..RawModel::default()
        }),
        signal: amplitude.clone(),
        idler: amplitude,
        sweep: Some(RawSweep {
            omega_m_max: Some(12.0),
            ..RawSweep::default()
        }),
        ..RawConfig::default()
    }
}

/// The raw configuration a preset stands for. `fig6a` and `fig6b` name the
/// two outputs of one measurement run and expand identically.
pub fn preset(p: Preset) -> RawConfig {
    let mut raw = match p {
        Preset::Fig2a => spectrum(0.1),
        Preset::Fig2b => spectrum(10.0),
        Preset::Fig3a => comb(2.0, 0.1),
        Preset::Fig3b => comb(-2.0, 0.1),
        Preset::Fig4a => comb(2.0, 10.0),
        Preset::Fig4b => comb(-2.0, 10.0),
        Preset::Fig6a | Preset::Fig6b => measurement(),
    };
    raw.preset = Some(p);
    raw
}
