//! Uniform frequency grids, trapezoidal quadrature and integer-order Bessel
//! functions of the first kind.
//!
//! All frequencies are dimensionless, in units where the bandwidth of the
//! unmodulated biphoton is one.

use std::ops::{Add, Mul};

use crate::error::{Error, Result};

/// Largest order accepted by [`bessel_j`].
pub const BESSEL_MAX_ORDER: u32 = 200;
/// Largest argument magnitude accepted by [`bessel_j`].
pub const BESSEL_MAX_ARG: f64 = 50.0;

const RESCALE_ABOVE: f64 = 1e100;
const RESCALE_BY: f64 = 1e-100;

/// Uniform sampling of a frequency interval centred on `center`.
///
/// `n_points` is odd so that the centre is itself a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    center: f64,
    half_width: f64,
    n_points: usize,
}

impl FrequencyGrid {
    pub fn new(center: f64, half_width: f64, n_points: usize) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::config("grid center must be finite"));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::config(format!(
                "grid half_width must be positive, got {half_width}"
            )));
        }
        if n_points < 3 || n_points.is_multiple_of(2) {
            return Err(Error::config(format!(
                "grid n_points must be odd and at least 3, got {n_points}"
            )));
        }
        Ok(Self {
            center,
            half_width,
            n_points,
        })
    }

    /// Grid centred on zero.
    pub fn symmetric(half_width: f64, n_points: usize) -> Result<Self> {
        Self::new(0.0, half_width, n_points)
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.n_points - 1) as f64
    }

    pub fn min(&self) -> f64 {
        self.center - self.half_width
    }

    pub fn max(&self) -> f64 {
        self.center + self.half_width
    }

    /// The `i`-th sample. The middle index returns `center` exactly.
    pub fn point(&self, i: usize) -> f64 {
        let mid = (self.n_points - 1) / 2;
        let offset = i as f64 - mid as f64;
        self.center + offset * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    /// Trapezoidal weights; they sum to `2 * half_width`.
    pub fn weights(&self) -> Vec<f64> {
        let h = self.spacing();
        let mut w = vec![h; self.n_points];
        w[0] = 0.5 * h;
        w[self.n_points - 1] = 0.5 * h;
        w
    }

    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.n_points {
            0.5 * self.spacing()
        } else {
            self.spacing()
        }
    }

    pub fn contains(&self, omega: f64) -> bool {
        omega >= self.min() && omega <= self.max()
    }

    /// Whether the closed interval `[lo, hi]` lies inside the grid.
    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        // one part in 1e12 of slack absorbs rounding in min()/max()
        let slack = 1e-12 * self.half_width.max(self.center.abs());
        lo >= self.min() - slack && hi <= self.max() + slack
    }
}

/// Scalars that can be integrated on a grid (real or complex samples).
pub trait Sample: Copy + Default + Add<Output = Self> + Mul<f64, Output = Self> {}

impl<T> Sample for T where T: Copy + Default + Add<Output = T> + Mul<f64, Output = T> {}

/// Trapezoidal quadrature of `values` sampled on `grid`.
pub fn integrate<T: Sample>(values: &[T], grid: &FrequencyGrid) -> Result<T> {
    if values.len() != grid.n_points() {
        return Err(Error::Dimension {
            expected: grid.n_points(),
            got: values.len(),
        });
    }
    Ok(integrate_unchecked(values, grid))
}

pub(crate) fn integrate_unchecked<T: Sample>(values: &[T], grid: &FrequencyGrid) -> T {
    let h = grid.spacing();
    let n = values.len();
    let interior = values[1..n - 1]
        .iter()
        .fold(T::default(), |acc, &v| acc + v);
    (interior + (values[0] + values[n - 1]) * 0.5) * h
}

fn check_bessel_args(order: u32, x: f64) -> Result<()> {
    if order > BESSEL_MAX_ORDER {
        return Err(Error::Range(format!(
            "Bessel order {order} exceeds {BESSEL_MAX_ORDER}"
        )));
    }
    if !x.is_finite() || x.abs() > BESSEL_MAX_ARG {
        return Err(Error::Range(format!(
            "Bessel argument {x} outside [-{BESSEL_MAX_ARG}, {BESSEL_MAX_ARG}]"
        )));
    }
    Ok(())
}

/// `J_n(x)` for integer `n`.
///
/// Validated for `|n| <= 200` and `|x| <= 50`; anything else is a range error.
pub fn bessel_j(n: i32, x: f64) -> Result<f64> {
    let order = n.unsigned_abs();
    check_bessel_args(order, x)?;
    let seq = bessel_j_upto(order as usize, x.abs())?;
    let mut value = seq[order as usize];
    // J_{-n}(x) = (-1)^n J_n(x) and J_n(-x) = (-1)^n J_n(x)
    let odd = order % 2 == 1;
    if odd && ((n < 0) != (x < 0.0)) {
        value = -value;
    }
    Ok(value)
}

/// `[J_0(x), J_1(x), ..., J_nmax(x)]` from a single backward recurrence.
///
/// Miller's algorithm: recur downward from an order well above both `nmax`
/// and `|x|`, then fix the scale with `J_0^2 + 2 sum J_k^2 = 1` and the sign
/// with `J_0 + 2 sum J_2k = 1`.
pub fn bessel_j_upto(nmax: usize, x: f64) -> Result<Vec<f64>> {
    check_bessel_args(nmax.min(u32::MAX as usize) as u32, x)?;
    if x == 0.0 {
        let mut out = vec![0.0; nmax + 1];
        out[0] = 1.0;
        return Ok(out);
    }
    let ax = x.abs();
    let top = (nmax as f64).max(ax.ceil());
    let mut start = top as usize + 20 + (60.0 * top).sqrt().ceil() as usize;
    start += start % 2;

    let mut out = vec![0.0; nmax + 1];
    let mut above = 0.0_f64; // j_{k+1}
    let mut current = 1e-30_f64; // j_k, starting at k = start
    let mut sum_sq = 0.0_f64;
    let mut sum_even = 0.0_f64;
    let two_over_x = 2.0 / ax;

    let mut k = start;
    loop {
        if k <= nmax {
            out[k] = current;
        }
        if k == 0 {
            sum_sq += current * current;
            sum_even += current;
            break;
        }
        sum_sq += 2.0 * current * current;
        if k.is_multiple_of(2) {
            sum_even += 2.0 * current;
        }
        let below = k as f64 * two_over_x * current - above;
        above = current;
        current = below;
        k -= 1;
        if current.abs() > RESCALE_ABOVE {
            current *= RESCALE_BY;
            above *= RESCALE_BY;
            sum_sq *= RESCALE_BY * RESCALE_BY;
            sum_even *= RESCALE_BY;
            for v in out.iter_mut().skip(k + 1) {
                *v *= RESCALE_BY;
            }
        }
    }

    let scale = sum_sq.sqrt().copysign(sum_even);
    for v in &mut out {
        *v /= scale;
    }
    if x < 0.0 {
        for (k, v) in out.iter_mut().enumerate() {
            if k % 2 == 1 {
                *v = -*v;
            }
        }
    }
    Ok(out)
}

/// Smallest `N >= 1` such that `sum_{|n| <= N} J_n(delta)^2 >= 1 - tol`.
///
/// The discarded power `2 sum_{n > N} J_n^2` is summed directly rather than
/// formed as `1 - partial`, so tolerances near machine epsilon still behave.
pub fn truncation_order(delta: f64, tol: f64) -> Result<usize> {
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::config(format!(
            "truncation depth must be non-negative, got {delta}"
        )));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::config(format!(
            "truncation tolerance must lie in (0, 1), got {tol}"
        )));
    }
    let nmax = ((delta.ceil() as usize) + 60).min(BESSEL_MAX_ORDER as usize);
    let seq = bessel_j_upto(nmax, delta)?;
    let mut tail = 0.0;
    let mut tails = vec![0.0; nmax + 1];
    for n in (1..=nmax).rev() {
        tails[n] = tail;
        tail += 2.0 * seq[n] * seq[n];
    }
    let order = (1..=nmax).find(|&n| tails[n] <= tol).unwrap_or(nmax);
    Ok(order)
}
