//! Fourier measurement of the biphoton waveform with slow detectors.
//!
//! Synchronized amplitude modulators `1 + delta cos(omega_m t)` on both
//! photons leave, to lowest order in `kappa = delta_s delta_i / 2pi`, a
//! coincidence term
//!
//! ```text
//! F(omega_m) = kappa int [phi(omega + omega_m) phi*(omega) + c.c.] domega
//! ```
//!
//! which is the cosine transform of `|phi~(tau)|^2`. Sweeping `omega_m` and
//! transforming back recovers the time-domain intensity of the biphoton.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::biphoton::BiphotonModel;
use crate::error::{Error, Result};
use crate::modulator::{depth_product_warning, ModulatorSpec, ModulatorWarning};

/// Coincidence term sampled on a uniform sweep `omega_m = 0..=omega_m_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementCurve {
    pub omega_m_values: Vec<f64>,
    /// Raw `F(omega_m)`, not mean-subtracted.
    pub f_values: Vec<f64>,
    pub kappa: f64,
    pub warnings: Vec<ModulatorWarning>,
}

impl MeasurementCurve {
    pub fn spacing(&self) -> f64 {
        self.omega_m_values[1] - self.omega_m_values[0]
    }

    /// `F` with its sweep average removed, as plotted against modulation frequency.
    pub fn mean_subtracted(&self) -> Vec<f64> {
        let mean = self.f_values.iter().sum::<f64>() / self.f_values.len() as f64;
        self.f_values.iter().map(|f| f - mean).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Window {
    #[default]
    None,
    /// One-sided Hann taper, `cos^2(pi omega_m / (2 omega_m_max))`.
    Hann,
}

/// Peak-normalized time-domain intensity recovered from a measurement curve.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveredWaveform {
    pub tau_values: Vec<f64>,
    pub intensity: Vec<f64>,
    /// Negative transform mass removed by clipping, relative to the total absolute mass.
    pub clipped_fraction: f64,
}

impl RecoveredWaveform {
    pub fn peak_tau(&self) -> f64 {
        let (idx, _) = self
            .intensity
            .iter()
            .enumerate()
            .fold(
                (0, f64::MIN),
                |best, (i, &v)| if v > best.1 { (i, v) } else { best },
            );
        self.tau_values[idx]
    }

    pub fn tau_step(&self) -> f64 {
        self.tau_values[1] - self.tau_values[0]
    }
}

/// Sweeps the synchronized amplitude-modulation frequency and records `F`.
pub fn measured_curve(
    model: &BiphotonModel,
    delta_s: f64,
    delta_i: f64,
    omega_m_max: f64,
    n_samples: usize,
) -> Result<MeasurementCurve> {
    if !(omega_m_max.is_finite() && omega_m_max > 0.0) {
        return Err(Error::config(format!(
            "sweep end must be positive, got {omega_m_max}"
        )));
    }
    if n_samples < 2 {
        return Err(Error::config("sweep needs at least two samples"));
    }
    let mod_s = ModulatorSpec::amplitude(delta_s, omega_m_max)?;
    let mod_i = ModulatorSpec::amplitude(delta_i, omega_m_max)?;
    let mut warnings = mod_s.warnings();
    warnings.extend(mod_i.warnings());
    warnings.extend(depth_product_warning(delta_s, delta_i));

    let shape = *model.shape();
    let grid = *model.grid();
    let (c0, r) = (shape.center(), shape.support_radius());
    if !grid.covers(c0 - r, c0 + r + omega_m_max) {
        return Err(Error::coverage(format!(
            "measurement sweep to {omega_m_max} needs the grid to span [{}, {}], have [{}, {}]",
            c0 - r,
            c0 + r + omega_m_max,
            grid.min(),
            grid.max()
        )));
    }

    let kappa = delta_s * delta_i / (2.0 * PI);
    let points = grid.points();
    let weighted_conj: Vec<Complex64> = points
        .iter()
        .enumerate()
        .map(|(j, &w)| shape.phi(w).conj() * grid.weight(j))
        .collect();
    let step = omega_m_max / (n_samples - 1) as f64;
    let omega_m_values: Vec<f64> = (0..n_samples).map(|k| k as f64 * step).collect();
    let f_values = omega_m_values
        .par_iter()
        .map(|&s| {
            let overlap = points
                .iter()
                .zip(&weighted_conj)
                .fold(Complex64::default(), |acc, (&w, &pc)| {
                    acc + shape.phi(w + s) * pc
                });
            // the + c.c. term doubles the real part
            2.0 * kappa * overlap.re
        })
        .collect();

    Ok(MeasurementCurve {
        omega_m_values,
        f_values,
        kappa,
        warnings,
    })
}

/// Discrete cosine quadrature `sum_k w_k F_k cos(omega_k tau)` at each `tau`.
pub fn cosine_transform(curve: &MeasurementCurve, taus: &[f64], window: Window) -> Vec<f64> {
    let n = curve.omega_m_values.len();
    let h = curve.spacing();
    let s_max = curve.omega_m_values[n - 1];
    let weighted: Vec<f64> = curve
        .f_values
        .iter()
        .zip(&curve.omega_m_values)
        .enumerate()
        .map(|(k, (&f, &s))| {
            let w = if k == 0 || k + 1 == n { 0.5 * h } else { h };
            let taper = match window {
                Window::None => 1.0,
                Window::Hann => (0.5 * PI * s / s_max).cos().powi(2),
            };
            f * w * taper
        })
        .collect();
    taus.par_iter()
        .map(|&tau| {
            weighted
                .iter()
                .zip(&curve.omega_m_values)
                .fold(0.0, |acc, (&wf, &s)| acc + wf * (s * tau).cos())
        })
        .collect()
}

/// Inverse cosine transform of the curve onto `tau = 0..=tau_max`, clipped at
/// zero and normalized to unit peak.
pub fn recover_waveform(
    curve: &MeasurementCurve,
    tau_max: f64,
    n_tau: usize,
) -> Result<RecoveredWaveform> {
    recover_waveform_with(curve, tau_max, n_tau, Window::None)
}

pub fn recover_waveform_with(
    curve: &MeasurementCurve,
    tau_max: f64,
    n_tau: usize,
    window: Window,
) -> Result<RecoveredWaveform> {
    if !(tau_max.is_finite() && tau_max > 0.0) {
        return Err(Error::config(format!(
            "tau_max must be positive, got {tau_max}"
        )));
    }
    if n_tau < 2 {
        return Err(Error::config("waveform needs at least two tau samples"));
    }
    let spacing = curve.spacing();
    let limit = PI / (2.0 * tau_max);
    if spacing >= limit {
        return Err(Error::coverage(format!(
            "sweep spacing {spacing} does not resolve tau up to {tau_max} (needs < {limit})"
        )));
    }
    let tau_step = tau_max / (n_tau - 1) as f64;
    let tau_values: Vec<f64> = (0..n_tau).map(|i| i as f64 * tau_step).collect();
    let raw = cosine_transform(curve, &tau_values, window);

    let negative: f64 = raw.iter().filter(|&&v| v < 0.0).map(|v| -v).sum();
    let absolute: f64 = raw.iter().map(|v| v.abs()).sum();
    let peak = raw.iter().cloned().fold(f64::MIN, f64::max);
    if peak.is_nan() || peak <= 0.0 {
        return Err(Error::coverage("recovered waveform has no positive part"));
    }
    let intensity = raw.iter().map(|&v| v.max(0.0) / peak).collect();
    Ok(RecoveredWaveform {
        tau_values,
        intensity,
        clipped_fraction: if absolute > 0.0 {
            negative / absolute
        } else {
            0.0
        },
    })
}
