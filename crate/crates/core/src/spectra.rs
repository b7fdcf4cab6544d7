//! Singles spectra at the signal and idler after modulation.
//!
//! `S(omega) = (T/2pi) sum_n |q_n|^2 |B(omega - n omega_m)|^2` and
//! `I(omega) = (T/2pi) sum_m |r_m|^2 |C(omega + m omega_m)|^2`, in counts per
//! unit bandwidth per gatewidth `T`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::biphoton::BiphotonModel;
use crate::error::{Error, Result};
use crate::modulator::ModulatorSpec;
use crate::numerics::{integrate_unchecked, FrequencyGrid};

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub grid: FrequencyGrid,
    pub values: Vec<f64>,
    pub gatewidth: f64,
    pub total_counts: f64,
}

pub(crate) fn check_gatewidth(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::config(format!(
            "gatewidth must be positive, got {t}"
        )))
    }
}

/// Weights `|c_n|^2` with the frequency shift of each line; zero weights dropped.
fn line_weights(modulator: &ModulatorSpec, sign: f64) -> Vec<(f64, f64)> {
    modulator
        .iter()
        .filter(|(_, c)| c.norm_sqr() != 0.0)
        .map(|(n, c)| (sign * n as f64 * modulator.omega_m(), c.norm_sqr()))
        .collect()
}

fn spectrum(
    model: &BiphotonModel,
    modulator: &ModulatorSpec,
    gatewidth: f64,
    sign: f64,
    what: &str,
) -> Result<SpectrumResult> {
    check_gatewidth(gatewidth)?;
    let lines = line_weights(modulator, sign);
    model.check_shifts(lines.iter().map(|&(s, _)| s), what)?;
    let grid = *model.grid();
    let shape = *model.shape();
    let prefactor = gatewidth / (2.0 * PI);
    let values: Vec<f64> = grid
        .points()
        .into_par_iter()
        .map(|w| {
            let sum = lines
                .iter()
                .fold(0.0, |acc, &(s, p)| acc + p * shape.b_norm_sqr(w - s));
            prefactor * sum
        })
        .collect();
    let total_counts = integrate_unchecked(&values, &grid);
    Ok(SpectrumResult {
        grid,
        values,
        gatewidth,
        total_counts,
    })
}

/// Signal spectrum through the signal-channel modulator.
pub fn signal_spectrum(
    model: &BiphotonModel,
    mod_s: &ModulatorSpec,
    gatewidth: f64,
) -> Result<SpectrumResult> {
    spectrum(model, mod_s, gatewidth, 1.0, "signal spectrum")
}

/// Idler spectrum through the idler-channel modulator, on the signal-frequency axis.
pub fn idler_spectrum(
    model: &BiphotonModel,
    mod_i: &ModulatorSpec,
    gatewidth: f64,
) -> Result<SpectrumResult> {
    // |C(omega + m omega_m)|^2: the m-th line sits at -m omega_m
    spectrum(model, mod_i, gatewidth, -1.0, "idler spectrum")
}
