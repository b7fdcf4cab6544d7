//! Time-energy entangled photon pairs passing through synchronized phase or
//! amplitude modulators.
//!
//! The crate computes the singles spectra after modulation, the classical and
//! quantum parts of the two-frequency correlation function, their sum rules,
//! and the Fourier measurement that recovers a biphoton's time-domain
//! intensity from coincidence rates recorded by slow detectors.
//!
//! Frequencies are dimensionless, in units where the unmodulated biphoton
//! bandwidth is one, and are measured as detunings from the signal centre.

pub mod biphoton;
pub mod correlation;
pub mod error;
pub mod measurement;
pub mod modulator;
pub mod numerics;
pub mod spectra;

pub use biphoton::{BiphotonModel, Shape};
pub use correlation::{
    classical_curve, default_delta_grid, quantum_comb, shared_omega_m, sum_rules, ClassicalCurve,
    SidebandComb, SumRuleReport,
};
pub use error::{Error, Result};
pub use measurement::{
    cosine_transform, measured_curve, recover_waveform, recover_waveform_with, MeasurementCurve,
    RecoveredWaveform, Window,
};
pub use modulator::{ModulatorKind, ModulatorSpec, ModulatorWarning, DEFAULT_TRUNCATION_TOL};
pub use numerics::{bessel_j, bessel_j_upto, integrate, truncation_order, FrequencyGrid};
pub use spectra::{idler_spectrum, signal_spectrum, SpectrumResult};
