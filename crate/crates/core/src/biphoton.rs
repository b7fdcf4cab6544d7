//! Down-converter output coefficients and the built-in biphoton models.
//!
//! The coefficients relate output operators to vacuum inputs,
//! `a_s = A a_s0 + B a_i0^dagger` and `a_i^dagger = C a_s0 + D a_i0^dagger`,
//! all as functions of the signal frequency. Every built-in model lives in
//! the low-gain limit: `|A| = |D| = 1` and `B = C*`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{integrate_unchecked, FrequencyGrid};

/// Half-width around the line centre that a rectangular model's grid must span.
pub const RECTANGULAR_SUPPORT: f64 = 20.0;
/// Gaussian support radius in units of `1 / duration`.
pub const GAUSSIAN_SUPPORT: f64 = 8.0;

/// Closed form of a built-in model, kept alongside the samples so that
/// frequency-shifted coefficients can be evaluated exactly off-grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    /// Unit-duration rectangular wavefunction; `B = exp(-ix) sin(x)/x`,
    /// `x = (omega - center)/2`.
    Rectangular { center: f64 },
    /// Gaussian with linear spectral phase; `C* = exp(-omega^2 d^2/4) exp(i omega delay)`.
    Gaussian { duration: f64, delay: f64 },
}

impl Shape {
    pub fn center(&self) -> f64 {
        match *self {
            Shape::Rectangular { center } => center,
            Shape::Gaussian { .. } => 0.0,
        }
    }

    /// Distance from the centre beyond which the model is treated as negligible.
    pub fn support_radius(&self) -> f64 {
        match *self {
            Shape::Rectangular { .. } => RECTANGULAR_SUPPORT,
            Shape::Gaussian { duration, .. } => GAUSSIAN_SUPPORT / duration,
        }
    }

    pub fn a(&self, _omega: f64) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    pub fn d(&self, _omega: f64) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    pub fn b(&self, omega: f64) -> Complex64 {
        match *self {
            Shape::Rectangular { center } => {
                let x = 0.5 * (omega - center);
                let (s, c) = x.sin_cos();
                let sinc = if x == 0.0 { 1.0 } else { s / x };
                Complex64::new(c * sinc, -s * sinc)
            }
            Shape::Gaussian { duration, delay } => {
                let env = (-0.25 * omega * omega * duration * duration).exp();
                Complex64::from_polar(env, omega * delay)
            }
        }
    }

    pub fn c(&self, omega: f64) -> Complex64 {
        self.b(omega).conj()
    }

    /// `|B(omega)|^2`, which is also `|C(omega)|^2`.
    pub fn b_norm_sqr(&self, omega: f64) -> f64 {
        match *self {
            Shape::Rectangular { center } => {
                let x = 0.5 * (omega - center);
                if x == 0.0 {
                    1.0
                } else {
                    let s = x.sin() / x;
                    s * s
                }
            }
            Shape::Gaussian { duration, .. } => (-0.5 * omega * omega * duration * duration).exp(),
        }
    }

    /// `phi = A C*`.
    pub fn phi(&self, omega: f64) -> Complex64 {
        self.a(omega) * self.c(omega).conj()
    }
}

/// Coefficients `A, B, C, D` sampled on a frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BiphotonModel {
    grid: FrequencyGrid,
    shape: Shape,
    label: String,
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    c: Vec<Complex64>,
    d: Vec<Complex64>,
}

impl BiphotonModel {
    fn sample(shape: Shape, grid: FrequencyGrid, label: String) -> Result<Self> {
        let r = shape.support_radius();
        let c0 = shape.center();
        if !grid.covers(c0 - r, c0 + r) {
            return Err(Error::config(format!(
                "{label}: grid [{}, {}] does not cover the model support [{}, {}]",
                grid.min(),
                grid.max(),
                c0 - r,
                c0 + r
            )));
        }
        let pts = grid.points();
        Ok(Self {
            grid,
            shape,
            label,
            a: pts.iter().map(|&w| shape.a(w)).collect(),
            b: pts.iter().map(|&w| shape.b(w)).collect(),
            c: pts.iter().map(|&w| shape.c(w)).collect(),
            d: pts.iter().map(|&w| shape.d(w)).collect(),
        })
    }

    /// Unit-duration rectangular biphoton centred at `center`.
    pub fn rectangular(center: f64, grid: FrequencyGrid) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::config("rectangular center must be finite"));
        }
        Self::sample(
            Shape::Rectangular { center },
            grid,
            format!("rectangular(center={center})"),
        )
    }

    /// Gaussian biphoton whose signal photon is delayed by `delay`.
    ///
    /// The time-domain amplitude is `exp(-(tau - delay)^2 / duration^2)`, so
    /// `duration` is the 1/e half-width of the amplitude envelope.
    pub fn gaussian_delayed(duration: f64, delay: f64, grid: FrequencyGrid) -> Result<Self> {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(Error::config(format!(
                "gaussian duration must be positive, got {duration}"
            )));
        }
        if !delay.is_finite() {
            return Err(Error::config("gaussian delay must be finite"));
        }
        Self::sample(
            Shape::Gaussian { duration, delay },
            grid,
            format!("gaussian(duration={duration}, delay={delay})"),
        )
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn a(&self) -> &[Complex64] {
        &self.a
    }

    pub fn b(&self) -> &[Complex64] {
        &self.b
    }

    pub fn c(&self) -> &[Complex64] {
        &self.c
    }

    pub fn d(&self) -> &[Complex64] {
        &self.d
    }

    /// The biphoton wavefunction `phi(omega) = A(omega) C*(omega)` on the grid.
    pub fn wavefunction(&self) -> Vec<Complex64> {
        self.a
            .iter()
            .zip(&self.c)
            .map(|(a, c)| a * c.conj())
            .collect()
    }

    /// Checks that lines centred at `center + shift` for every `shift` lie
    /// within the grid, support included.
    pub fn check_shifts(&self, shifts: impl IntoIterator<Item = f64>, what: &str) -> Result<()> {
        let r = self.shape.support_radius();
        let c0 = self.shape.center();
        for s in shifts {
            let (lo, hi) = (c0 + s - r, c0 + s + r);
            if !self.grid.covers(lo, hi) {
                return Err(Error::coverage(format!(
                    "{what}: line shifted by {s} spans [{lo}, {hi}], outside grid [{}, {}]",
                    self.grid.min(),
                    self.grid.max()
                )));
            }
        }
        Ok(())
    }

    /// Pair generation rate `R = (1/2pi) int |B|^2 domega`.
    pub fn pair_rate(&self) -> f64 {
        let b2: Vec<f64> = self.b.iter().map(|b| b.norm_sqr()).collect();
        integrate_unchecked(&b2, &self.grid) / (2.0 * PI)
    }
}

/// `R = (1/2pi) int |B|^2 domega` for raw samples of `B`.
pub fn pair_rate_of(b: &[Complex64], grid: &FrequencyGrid) -> Result<f64> {
    let b2: Vec<f64> = b.iter().map(|b| b.norm_sqr()).collect();
    Ok(crate::numerics::integrate(&b2, grid)? / (2.0 * PI))
}
