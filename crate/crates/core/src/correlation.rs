//! Two-frequency correlation between signal and idler.
//!
//! The coincidence correlation splits into a continuous classical part
//! `c(Delta)`, the cross-correlation of the two singles spectra, and a
//! quantum part that is a comb of delta functions,
//! `q(Delta) = (T/2pi) sum_z f(z) delta(Delta + z omega_m)`, with
//!
//! ```text
//! f(z) = int | sum_n q_n* r_{z-n}* C(omega - n omega_m) A*(omega - n omega_m) |^2 domega
//! ```
//!
//! The comb is kept as its discrete weights; it is never smeared into peaks.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::biphoton::BiphotonModel;
use crate::error::{Error, Result};
use crate::modulator::{ModulatorKind, ModulatorSpec};
use crate::numerics::{integrate_unchecked, FrequencyGrid};
use crate::spectra::{check_gatewidth, idler_spectrum, signal_spectrum};

/// `R T` below which the single-pair observation regime is reported.
pub const SINGLE_PAIR_THRESHOLD: f64 = 0.1;

/// Relative tolerance on equality of the two modulation frequencies.
const OMEGA_M_MATCH: f64 = 1e-12;

/// Weights `f(z)` of the quantum delta comb; the `z`-th delta sits at `Delta = -z omega_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SidebandComb {
    pub omega_m: f64,
    /// Largest `|z|`; weights cover `z = -max_order..=max_order`.
    pub max_order: usize,
    pub weights: Vec<f64>,
    pub gatewidth: f64,
    /// Pair rate of the model the comb was computed from.
    pub pair_rate: f64,
}

impl SidebandComb {
    pub fn weight(&self, z: i64) -> f64 {
        let idx = z + self.max_order as i64;
        if idx < 0 || idx as usize >= self.weights.len() {
            0.0
        } else {
            self.weights[idx as usize]
        }
    }

    /// `(z, f(z))` in increasing `z`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let z0 = -(self.max_order as i64);
        self.weights
            .iter()
            .enumerate()
            .map(move |(i, &f)| (z0 + i as i64, f))
    }

    /// `f(z) / (2 pi R)`; sums to one for a lossless pair of modulators.
    pub fn normalized(&self) -> Vec<f64> {
        let norm = 2.0 * PI * self.pair_rate;
        self.weights.iter().map(|f| f / norm).collect()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `int q(Delta) dDelta = (T/2pi) sum_z f(z)`.
    pub fn quantum_sum(&self) -> f64 {
        self.gatewidth / (2.0 * PI) * self.total_weight()
    }

    /// Share of the comb weight away from `z = 0`.
    pub fn off_center_fraction(&self) -> f64 {
        let total = self.total_weight();
        (total - self.weight(0)) / total
    }
}

/// Classical term `c(Delta)` sampled on a detuning grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalCurve {
    pub delta_grid: FrequencyGrid,
    pub values: Vec<f64>,
    pub gatewidth: f64,
}

impl ClassicalCurve {
    pub fn integral(&self) -> f64 {
        integrate_unchecked(&self.values, &self.delta_grid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumRuleReport {
    /// `int q dDelta`.
    pub quantum_sum: f64,
    /// `int c dDelta`.
    pub classical_integral: f64,
    pub pair_rate: f64,
    pub gatewidth: f64,
    /// `quantum_sum / (R T) - 1`.
    pub quantum_deviation: f64,
    /// `classical_integral / (R T)^2 - 1`.
    pub classical_deviation: f64,
    /// `R T < 0.1`, where single pairs dominate the coincidences.
    pub single_pair_regime: bool,
}

/// Common modulation frequency of a synchronized pair; identities adopt the other's.
pub fn shared_omega_m(mod_s: &ModulatorSpec, mod_i: &ModulatorSpec) -> Result<f64> {
    let is_id = |m: &ModulatorSpec| m.kind() == ModulatorKind::Identity;
    match (is_id(mod_s), is_id(mod_i)) {
        (true, _) => Ok(mod_i.omega_m()),
        (false, true) => Ok(mod_s.omega_m()),
        (false, false) => {
            let (a, b) = (mod_s.omega_m(), mod_i.omega_m());
            if (a - b).abs() <= OMEGA_M_MATCH * a.max(b) {
                Ok(a)
            } else {
                Err(Error::config(format!(
                    "signal and idler modulators must share one drive frequency, got {a} and {b}"
                )))
            }
        }
    }
}

/// Weights of the quantum correlation comb for a synchronized modulator pair.
pub fn quantum_comb(
    model: &BiphotonModel,
    mod_s: &ModulatorSpec,
    mod_i: &ModulatorSpec,
    gatewidth: f64,
) -> Result<SidebandComb> {
    check_gatewidth(gatewidth)?;
    let omega_m = shared_omega_m(mod_s, mod_i)?;
    let signal_lines: Vec<(i64, Complex64)> =
        mod_s.iter().filter(|(_, q)| q.norm_sqr() != 0.0).collect();
    model.check_shifts(
        signal_lines.iter().map(|&(n, _)| n as f64 * omega_m),
        "quantum comb",
    )?;

    let grid = *model.grid();
    let shape = *model.shape();
    let points = grid.points();
    // C(omega - n omega_m) A*(omega - n omega_m) for each retained signal line
    let shifted: Vec<Vec<Complex64>> = signal_lines
        .par_iter()
        .map(|&(n, _)| {
            let s = n as f64 * omega_m;
            points
                .iter()
                .map(|&w| shape.c(w - s) * shape.a(w - s).conj())
                .collect()
        })
        .collect();

    let max_order = mod_s.half_order() + mod_i.half_order();
    let weights: Vec<f64> = (-(max_order as i64)..=max_order as i64)
        .into_par_iter()
        .map(|z| {
            let terms: Vec<(Complex64, &Vec<Complex64>)> = signal_lines
                .iter()
                .zip(&shifted)
                .filter_map(|(&(n, q), g)| {
                    let coeff = q.conj() * mod_i.coeff(z - n).conj();
                    (coeff.norm_sqr() != 0.0).then_some((coeff, g))
                })
                .collect();
            if terms.is_empty() {
                return 0.0;
            }
            let mut intensity = vec![0.0; points.len()];
            let mut amp = vec![Complex64::default(); points.len()];
            for (coeff, g) in &terms {
                for (a, gj) in amp.iter_mut().zip(g.iter()) {
                    *a += coeff * gj;
                }
            }
            for (i, a) in intensity.iter_mut().zip(&amp) {
                *i = a.norm_sqr();
            }
            integrate_unchecked(&intensity, &grid)
        })
        .collect();

    Ok(SidebandComb {
        omega_m,
        max_order,
        weights,
        gatewidth,
        pair_rate: model.pair_rate(),
    })
}

/// Offset and stride that map `omega_j + Delta_k` onto grid index `j + offset + k * stride`.
fn commensurate(grid: &FrequencyGrid, delta_grid: &FrequencyGrid) -> Option<(i64, i64)> {
    let h = grid.spacing();
    let stride = delta_grid.spacing() / h;
    let offset = delta_grid.min() / h;
    let (rs, ro) = (stride.round(), offset.round());
    let exact = (stride - rs).abs() < 1e-9 && (offset - ro).abs() < 1e-9 && rs >= 1.0;
    exact.then_some((ro as i64, rs as i64))
}

/// Default detuning axis for `c(Delta)`: twice the model window on each side,
/// sampled every fourth model spacing (every second when needed to keep the
/// point count odd) so that grid-index shifting applies.
pub fn default_delta_grid(model_grid: &FrequencyGrid) -> Result<FrequencyGrid> {
    let intervals = 2 * (model_grid.n_points() - 1);
    let stride = if (intervals / 4).is_multiple_of(2) { 4 } else { 2 };
    FrequencyGrid::symmetric(2.0 * model_grid.half_width(), intervals / stride + 1)
}

/// Classical correlation term on the requested detuning grid.
///
/// Both singles spectra are taken on the model grid (zero outside it), and
/// `c(Delta) = int S(omega) I(omega + Delta) domega`, so that
/// `int c dDelta` equals the product of the two total counts on that window.
pub fn classical_curve(
    model: &BiphotonModel,
    mod_s: &ModulatorSpec,
    mod_i: &ModulatorSpec,
    gatewidth: f64,
    delta_grid: &FrequencyGrid,
) -> Result<ClassicalCurve> {
    let omega_m = shared_omega_m(mod_s, mod_i)?;
    let signal = signal_spectrum(model, mod_s, gatewidth)?;
    let idler = idler_spectrum(model, mod_i, gatewidth)?;
    let grid = *model.grid();
    let n = grid.n_points();
    let weighted_signal: Vec<f64> = signal
        .values
        .iter()
        .enumerate()
        .map(|(j, s)| grid.weight(j) * s)
        .collect();
    let deltas = delta_grid.points();

    let values: Vec<f64> = match commensurate(&grid, delta_grid) {
        Some((offset, stride)) => {
            let idler = &idler.values;
            (0..deltas.len())
                .into_par_iter()
                .map(|k| {
                    let shift = offset + k as i64 * stride;
                    let lo = (-shift).max(0) as usize;
                    let hi = ((n as i64) - shift).min(n as i64);
                    if hi <= lo as i64 {
                        return 0.0;
                    }
                    (lo..hi as usize).fold(0.0, |acc, j| {
                        acc + weighted_signal[j] * idler[(j as i64 + shift) as usize]
                    })
                })
                .collect()
        }
        None => {
            let shape = *model.shape();
            let lines: Vec<(f64, f64)> = mod_i
                .iter()
                .filter(|(_, r)| r.norm_sqr() != 0.0)
                .map(|(m, r)| (m as f64 * omega_m, r.norm_sqr()))
                .collect();
            let prefactor = gatewidth / (2.0 * PI);
            let points = grid.points();
            deltas
                .par_iter()
                .map(|&d| {
                    points
                        .iter()
                        .zip(&weighted_signal)
                        .fold(0.0, |acc, (&w, &ws)| {
                            let x = w + d;
                            if ws == 0.0 || !grid.contains(x) {
                                return acc;
                            }
                            let idler = lines
                                .iter()
                                .fold(0.0, |a, &(s, p)| a + p * shape.b_norm_sqr(x + s));
                            acc + ws * prefactor * idler
                        })
                })
                .collect()
        }
    };

    Ok(ClassicalCurve {
        delta_grid: *delta_grid,
        values,
        gatewidth,
    })
}

/// Integrated quantum and classical correlation against `R T` and `(R T)^2`.
pub fn sum_rules(
    comb: &SidebandComb,
    curve: &ClassicalCurve,
    model: &BiphotonModel,
) -> Result<SumRuleReport> {
    if comb.gatewidth != curve.gatewidth {
        return Err(Error::config(format!(
            "comb and classical curve use different gatewidths ({} vs {})",
            comb.gatewidth, curve.gatewidth
        )));
    }
    let r = model.pair_rate();
    let t = comb.gatewidth;
    let rt = r * t;
    let quantum_sum = comb.quantum_sum();
    let classical_integral = curve.integral();
    Ok(SumRuleReport {
        quantum_sum,
        classical_integral,
        pair_rate: r,
        gatewidth: t,
        quantum_deviation: quantum_sum / rt - 1.0,
        classical_deviation: classical_integral / (rt * rt) - 1.0,
        single_pair_regime: rt < SINGLE_PAIR_THRESHOLD,
    })
}
