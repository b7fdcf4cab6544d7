//! Periodic modulators as finite Fourier combs.
//!
//! A modulator with transmission `sum_n c_n exp(-i n omega_m t)` acts in the
//! frequency domain as a comb of delta functions at `n omega_m` with weights
//! `c_n`. Combs are stored densely over `n = -N..=N`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{bessel_j_upto, truncation_order};

/// Captured-power tolerance used when no other is requested.
pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-10;
/// Largest phase depth accepted by [`ModulatorSpec::phase`].
pub const MAX_PHASE_DEPTH: f64 = 20.0;
/// Amplitude depth product at which first-order measurement theory is flagged.
pub const KAPPA_WARNING_PRODUCT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulatorKind {
    Identity,
    Phase,
    Amplitude,
    /// User-supplied coefficient list.
    Custom,
}

/// Conditions under which a modulator is computable but outside the regime
/// its physics assumes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModulatorWarning {
    /// `1 + delta cos(omega_m t)` exceeds unit transmission.
    DepthExceedsTransmission { depth: f64 },
    /// `delta_s * delta_i` is not small; first-order measurement theory degrades.
    DepthProductNotSmall { product: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModulatorSpec {
    omega_m: f64,
    kind: ModulatorKind,
    depth: f64,
    half_order: usize,
    coeffs: Vec<Complex64>,
    power_tol: f64,
}

fn check_omega_m(omega_m: f64) -> Result<()> {
    if omega_m.is_finite() && omega_m > 0.0 {
        Ok(())
    } else {
        Err(Error::config(format!(
            "modulation frequency must be positive, got {omega_m}"
        )))
    }
}

impl ModulatorSpec {
    /// A modulator that does nothing: the single coefficient `c_0 = 1`.
    pub fn identity(omega_m: f64) -> Result<Self> {
        check_omega_m(omega_m)?;
        Ok(Self {
            omega_m,
            kind: ModulatorKind::Identity,
            depth: 0.0,
            half_order: 0,
            coeffs: vec![Complex64::new(1.0, 0.0)],
            power_tol: 0.0,
        })
    }

    /// Ideal phase modulator `exp(i delta sin(omega_m t))`, with coefficients
    /// `c_n = J_n(-delta)` kept out to the order that captures `1 - tol` of the power.
    ///
    /// Negative `delta` is the same modulator driven in phase opposition.
    pub fn phase(delta: f64, omega_m: f64, tol: f64) -> Result<Self> {
        check_omega_m(omega_m)?;
        if !(delta.is_finite() && delta.abs() <= MAX_PHASE_DEPTH) {
            return Err(Error::config(format!(
                "phase depth must satisfy |delta| <= {MAX_PHASE_DEPTH}, got {delta}"
            )));
        }
        let n = truncation_order(delta.abs(), tol)?;
        let positive = bessel_j_upto(n, -delta)?;
        let coeffs = (-(n as i64)..=n as i64)
            .map(|k| {
                let j = positive[k.unsigned_abs() as usize];
                // J_{-k} = (-1)^k J_k
                let v = if k < 0 && k % 2 != 0 { -j } else { j };
                Complex64::new(v, 0.0)
            })
            .collect();
        Ok(Self {
            omega_m,
            kind: ModulatorKind::Phase,
            depth: delta,
            half_order: n,
            coeffs,
            power_tol: tol,
        })
    }

    /// Amplitude modulator `1 + delta cos(omega_m t)`: coefficients
    /// `{delta/2, 1, delta/2}` at `n = -1, 0, 1`.
    pub fn amplitude(delta: f64, omega_m: f64) -> Result<Self> {
        check_omega_m(omega_m)?;
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::config(format!(
                "amplitude depth must be positive, got {delta}"
            )));
        }
        let side = Complex64::new(0.5 * delta, 0.0);
        Ok(Self {
            omega_m,
            kind: ModulatorKind::Amplitude,
            depth: delta,
            half_order: 1,
            coeffs: vec![side, Complex64::new(1.0, 0.0), side],
            power_tol: 0.0,
        })
    }

    /// Arbitrary comb; `coeffs` holds `c_{-N}..=c_N` and must have odd length.
    pub fn from_coefficients(omega_m: f64, coeffs: Vec<Complex64>) -> Result<Self> {
        check_omega_m(omega_m)?;
        if coeffs.len().is_multiple_of(2) {
            return Err(Error::config(format!(
                "coefficient list must have odd length (n = -N..=N), got {}",
                coeffs.len()
            )));
        }
        if coeffs
            .iter()
            .any(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::config("coefficients must be finite"));
        }
        Ok(Self {
            omega_m,
            kind: ModulatorKind::Custom,
            depth: 0.0,
            half_order: coeffs.len() / 2,
            coeffs,
            power_tol: 0.0,
        })
    }

    pub fn omega_m(&self) -> f64 {
        self.omega_m
    }

    pub fn kind(&self) -> ModulatorKind {
        self.kind
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    /// `N`, the largest retained `|n|`.
    pub fn half_order(&self) -> usize {
        self.half_order
    }

    /// Captured-power tolerance requested at construction (phase kind only).
    pub fn power_tol(&self) -> f64 {
        self.power_tol
    }

    /// Dense coefficients for `n = -N..=N`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `c_n`, zero outside the retained range.
    pub fn coeff(&self, n: i64) -> Complex64 {
        let idx = n + self.half_order as i64;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Complex64::default()
        } else {
            self.coeffs[idx as usize]
        }
    }

    /// `(n, c_n)` pairs in increasing `n`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n0 = -(self.half_order as i64);
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (n0 + i as i64, c))
    }

    /// `sum |c_n|^2`.
    pub fn power(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Time-domain transmission `sum_n c_n exp(-i n omega_m t)`.
    pub fn transmission(&self, t: f64) -> Complex64 {
        self.iter()
            .map(|(n, c)| c * Complex64::from_polar(1.0, -(n as f64) * self.omega_m * t))
            .sum()
    }

    /// Comb of the two modulators applied in series at the same frequency.
    pub fn convolve(&self, other: &ModulatorSpec) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        out
    }

    pub fn warnings(&self) -> Vec<ModulatorWarning> {
        match self.kind {
            ModulatorKind::Amplitude if self.depth >= 1.0 => {
                vec![ModulatorWarning::DepthExceedsTransmission { depth: self.depth }]
            }
            _ => Vec::new(),
        }
    }
}

/// Flags a synchronized amplitude-modulator pair whose depth product is not small.
pub fn depth_product_warning(delta_s: f64, delta_i: f64) -> Option<ModulatorWarning> {
    let product = delta_s * delta_i;
    (product.abs() >= KAPPA_WARNING_PRODUCT)
        .then_some(ModulatorWarning::DepthProductNotSmall { product })
}
